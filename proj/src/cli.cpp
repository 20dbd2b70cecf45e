#include "psvf/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "psvf/analysis.hpp"
#include "psvf/classify.hpp"
#include "psvf/return_map.hpp"

namespace psvf::cli {

namespace {

Side initial_side(const Psvf& z, const State3& p) {
  if (p.z() > kSigmaMembershipTol) return Side::upper;
  if (p.z() < -kSigmaMembershipTol) return Side::lower;
  const SigmaClass c = classify_sigma_point(z, State3(p.x(), p.y(), 0.0));
  if (c.kind == SigmaKind::crossing_up) return Side::upper;
  if (c.kind == SigmaKind::crossing_down) return Side::lower;
  throw NoReturn("simulate: start point " + std::string(to_string(c.kind)) + " is not a crossing point");
}

bool has_planes(FamilyTag t) { return t == FamilyTag::z_l || t == FamilyTag::z_kl; }
bool has_cylinders(FamilyTag t) { return t == FamilyTag::z_eps || t == FamilyTag::z_kl; }

CylinderSearch search_for(const RunConfig& cfg, const FieldParams& params) {
  CylinderSearch s = default_cylinder_search(params, cfg.j_cutoff);
  if (cfg.y_range) {
    s.y_lo = cfg.y_range->first;
    s.y_hi = cfg.y_range->second;
  }
  s.grid_n = std::max(cfg.grid, 100);
  s.analytic_tail = params.rho == Rho::infinite ? cfg.j_cutoff : 0;
  return s;
}

}  // namespace

Table cmd_simulate(const RunConfig& cfg) {
  validate(cfg);
  if (!cfg.returns && !cfg.time) throw InvalidParams("simulate: give --returns or --time");
  if (!cfg.start.allFinite()) throw InvalidParams("simulate: start point must be finite");
  const Psvf z = make_family(cfg.family, cfg.params);

  Table t;
  t.columns = {"t", "x", "y", "z", "segment", "side"};
  State3 p = cfg.start;
  Side side = initial_side(z, p);
  double clock = 0.0;
  long long segment = 0;
  int completed = 0;
  while (true) {
    const SmoothField& w = side == Side::upper ? z.upper : z.lower;
    const double limit = cfg.time ? *cfg.time - clock : cfg.integrator.max_flight_time;
    const FlowSegment seg = flow_to_sigma(w, p, cfg.integrator, limit, true);
    const std::string label = side == Side::upper ? "upper" : "lower";
    for (const Sample& s : seg.samples) {
      t.rows.push_back({clock + s.t, s.state.x(), s.state.y(), s.state.z(), segment, label});
    }
    if (!seg.hit) {
      if (cfg.returns) throw NoReturn("simulate: no return to the switching plane within max-flight-time");
      break;
    }
    clock += seg.hit->time;
    p = State3(seg.hit->point.x(), seg.hit->point.y(), 0.0);
    if (side == Side::lower) ++completed;
    if (cfg.returns && completed >= *cfg.returns) break;
    if (cfg.time && clock >= *cfg.time) break;
    side = side == Side::upper ? Side::lower : Side::upper;
    ++segment;
  }
  std::ostringstream s;
  s << "segments=" << segment + 1 << " returns=" << completed;
  t.summary.push_back(s.str());
  return t;
}

Table cmd_poincare(const RunConfig& cfg) {
  validate(cfg);
  const Psvf z = make_family(cfg.family, cfg.params);
  const ReturnEngine semi(z, ReturnMode::semi_analytic, cfg.integrator);
  const ReturnEngine numeric(z, ReturnMode::numeric, cfg.integrator);
  const auto [lo, hi] = cfg.y_range.value_or(std::pair{0.05, 1.0});

  Table t;
  t.columns = {"y", "phi2", "phi2_minus_y", "dphi2"};
  if (cfg.verify) {
    t.columns.push_back("phi2_numeric");
    t.columns.push_back("abs_diff");
  }
  const int n = std::max(cfg.grid, 2);
  int sign_changes = 0;
  double last = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = lo + (hi - lo) * i / (n - 1);
    const double d = semi.displacement(y);
    const double w = semi.phi2(y);
    std::vector<Cell> row{y, w, d, semi.phi2_slope(y)};
    if (cfg.verify) {
      const double wn = numeric.phi2(y);
      row.emplace_back(wn);
      row.emplace_back(std::abs(wn - w));
    }
    if (d != 0.0) {
      if (last != 0.0 && (last > 0.0) != (d > 0.0)) ++sign_changes;
      last = d;
    }
    t.rows.push_back(std::move(row));
  }
  t.summary.push_back("sign_changes=" + std::to_string(sign_changes));
  return t;
}

Table cmd_analyze(const RunConfig& cfg) {
  validate(cfg);
  const Psvf z = make_family(cfg.family, cfg.params);
  Table t;
  t.columns = {"record", "i", "j", "x", "y", "x_multiplier", "y_multiplier", "stability", "detection"};

  std::size_t planes = 0;
  if (has_planes(cfg.family) && z.params.lambda != 0.0) {
    for (const PlaneRecord& r : find_invariant_planes(z.params, cfg.y_ref)) {
      t.rows.push_back({std::string("plane"), static_cast<long long>(r.index), std::monostate{}, r.location,
                        r.reference_y, r.x_multiplier, std::monostate{}, std::string(to_string(r.stability)),
                        std::string("numeric")});
      ++planes;
    }
  }

  std::size_t cylinders = 0;
  std::size_t analytic_only = 0;
  bool continuum = !has_cylinders(cfg.family);
  if (has_cylinders(cfg.family)) {
    const ReturnEngine engine(z, ReturnMode::semi_analytic, cfg.integrator);
    const CylinderScan scan = find_cylinders(engine, search_for(cfg, z.params));
    continuum = scan.degenerate_continuum;
    for (const CylinderRecord& r : scan.records) {
      t.rows.push_back({std::string("cylinder"), std::monostate{}, static_cast<long long>(r.index), std::monostate{},
                        r.radius, std::monostate{}, r.y_multiplier, std::string(to_string(r.stability)),
                        std::string(to_string(r.detection))});
      (r.detection == Detection::numeric ? cylinders : analytic_only) += 1;
    }
  }

  std::size_t cycles = 0;
  if (cfg.family == FamilyTag::z_kl && z.params.lambda != 0.0) {
    CycleOptions opt;
    opt.j_cutoff = cfg.j_cutoff;
    opt.grid_n = std::max(cfg.grid, 100);
    opt.integrator = cfg.integrator;
    for (const CycleRecord& r : enumerate_limit_cycles(z.params, opt)) {
      t.rows.push_back({std::string("cycle"), static_cast<long long>(r.plane_index),
                        static_cast<long long>(r.cylinder_index), r.base.x, r.base.y, r.x_multiplier, r.y_multiplier,
                        std::string(to_string(r.stability)), std::string(to_string(r.detection))});
      ++cycles;
    }
  }

  std::ostringstream s;
  s << "planes=" << planes << " cylinders=" << cylinders << " cycles=" << cycles;
  if (analytic_only > 0) s << " analytic-only=" << analytic_only;
  if (continuum) s << " degenerate-continuum";
  t.summary.push_back(s.str());
  return t;
}

Table cmd_scan(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.eps_list.empty()) throw InvalidParams("scan: --eps-list is required");
  Table t;
  t.columns = {"eps", "j", "radius", "multiplier", "stability", "detection", "flag"};
  for (const EpsilonScan& e : scan_epsilon(cfg.params, cfg.eps_list, std::max(cfg.grid, 100), cfg.j_cutoff)) {
    if (e.cylinders.degenerate_continuum) {
      t.rows.push_back({e.eps, std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{},
                        std::monostate{}, std::string("continuum")});
      continue;
    }
    for (const CylinderRecord& r : e.cylinders.records) {
      t.rows.push_back({e.eps, static_cast<long long>(r.index), r.radius, r.y_multiplier,
                        std::string(to_string(r.stability)), std::string(to_string(r.detection)), std::string()});
    }
  }
  return t;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Piecewise-smooth vector fields: simulation, return maps and invariant-object analysis", "psvf"};
  app.require_subcommand(1);

  struct Flags {
    std::string config, out, format, y_range, eps_list, start, plot_script;
    int returns = 0, grid = 0;
    double time = 0.0;
    bool verify = false;
    std::vector<std::string> settings;
  } f;

  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "flat key=value configuration file");
    sub->add_option("--out", f.out, "output path (default: stdout)");
    sub->add_option("--format", f.format, "csv or json");
    sub->add_flag("--verify", f.verify, "add a numeric-integration cross-check column");
    sub->add_option("--returns", f.returns, "number of full returns to simulate");
    sub->add_option("--time", f.time, "total simulated time");
    sub->add_option("--y-range", f.y_range, "A:B window on the switching plane");
    sub->add_option("--grid", f.grid, "number of grid samples");
    sub->add_option("--eps-list", f.eps_list, "comma-separated eps values");
    sub->add_option("--start", f.start, "initial point x,y,z");
    sub->add_option("--plot-script", f.plot_script, "write a matplotlib script for the CSV output");
    sub->add_option("--set", f.settings, "override any config key: KEY=VALUE")->take_all();
  };
  CLI::App* simulate = app.add_subcommand("simulate", "integrate an orbit across the switching plane");
  CLI::App* poincare = app.add_subcommand("poincare", "sample the return map on the switching plane");
  CLI::App* analyze = app.add_subcommand("analyze", "invariant planes, cylinders and limit cycles");
  CLI::App* scan = app.add_subcommand("scan", "cylinder detection across a list of eps values");
  for (CLI::App* sub : {simulate, poincare, analyze, scan}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig cfg;
  Table table;
  try {
    if (!f.config.empty()) load_config_file(cfg, f.config);
    auto given = [sub](const char* name) { return sub->count(name) > 0; };
    for (const std::string& kv : f.settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw InvalidParams("--set expects KEY=VALUE");
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (given("--out")) cfg.out = f.out;
    if (given("--format")) apply_setting(cfg, "format", f.format);
    if (given("--verify")) cfg.verify = f.verify;
    if (given("--returns")) apply_setting(cfg, "returns", std::to_string(f.returns));
    if (given("--time")) apply_setting(cfg, "time", format_real(f.time));
    if (given("--y-range")) apply_setting(cfg, "y_range", f.y_range);
    if (given("--grid")) apply_setting(cfg, "grid", std::to_string(f.grid));
    if (given("--eps-list")) apply_setting(cfg, "eps_list", f.eps_list);
    if (given("--start")) apply_setting(cfg, "start", f.start);
    if (given("--plot-script")) cfg.plot_script = f.plot_script;
    if (!cfg.plot_script.empty() && (cfg.out.empty() || cfg.format != OutputFormat::csv)) {
      throw InvalidParams("--plot-script needs --out with csv format");
    }

    if (sub == simulate) {
      table = cmd_simulate(cfg);
    } else if (sub == poincare) {
      table = cmd_poincare(cfg);
    } else if (sub == analyze) {
      table = cmd_analyze(cfg);
    } else {
      table = cmd_scan(cfg);
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (cfg.out.empty()) {
    write_table(out, table, cfg);
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "config error: cannot write '" << cfg.out << "'\n";
      return kExitConfig;
    }
    write_table(file, table, cfg);
    for (const auto& s : table.summary) out << s << "\n";
  }

  if (!cfg.plot_script.empty()) {
    std::string x = "y", y = "phi2_minus_y";
    if (sub == simulate) {
      x = "y";
      y = "z";
    } else if (sub == scan) {
      x = "eps";
      y = "radius";
    } else if (sub == analyze) {
      x = "x";
      y = "y";
    }
    std::ofstream script(cfg.plot_script);
    script << plot_script(cfg.out, x, y);
  }
  return kExitOk;
}

}  // namespace psvf::cli
