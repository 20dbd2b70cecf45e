#include "psvf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

namespace psvf {

std::string_view to_string(PlaneStability s) { return s == PlaneStability::repelling ? "repelling" : "attracting"; }
std::string_view to_string(CylinderStability s) { return s == CylinderStability::attractor ? "attractor" : "repeller"; }
std::string_view to_string(CycleStability s) {
  switch (s) {
    case CycleStability::attractor:
      return "attractor";
    case CycleStability::repeller:
      return "repeller";
    case CycleStability::saddle_type:
      return "saddle-type";
  }
  return "?";
}
std::string_view to_string(Detection d) { return d == Detection::numeric ? "numeric" : "analytic-only"; }

std::vector<PlaneRecord> find_invariant_planes(const FieldParams& params, double reference_y) {
  if (params.L < 1 || !(params.mu > 0.0) || params.lambda == 0.0) {
    throw InvalidParams("find_invariant_planes: requires L >= 1, mu > 0 and lambda != 0");
  }
  std::vector<PlaneRecord> planes;
  planes.reserve(static_cast<std::size_t>(params.L));
  for (int i = 0; i < params.L; ++i) {
    const double x = static_cast<double>(i) * params.mu;
    const double rate = params.lambda * product_poly(x, params.mu, params.L).derivative;
    PlaneRecord r;
    r.index = i;
    r.location = x;
    r.reference_y = reference_y;
    r.x_multiplier = std::exp(2.0 * reference_y * rate);
    r.stability = rate > 0.0 ? PlaneStability::repelling : PlaneStability::attracting;
    planes.push_back(r);
  }
  return planes;
}

CylinderSearch default_cylinder_search(const FieldParams& params, int j_cutoff) {
  CylinderSearch s;
  const double e = std::abs(params.eps);
  if (e == 0.0) return s;
  if (params.rho == Rho::finite) {
    s.y_lo = 0.05 * e;
    s.y_hi = 1.5 * params.k * e;
  } else {
    const double e2 = e * e;
    s.y_lo = e2 / (j_cutoff + 0.5);
    s.y_hi = 1.5 * e2;
  }
  return s;
}

namespace {

// Nearest closed-form root index for a detected radius.
int root_index(const BumpSpec& bump, double y) {
  if (bump.rho == Rho::finite) return static_cast<int>(std::lround(y / bump.eps));
  return static_cast<int>(std::lround(bump.eps * bump.eps / y));
}

std::vector<double> evaluate_grid(const ReturnEngine& engine, const std::vector<double>& ys) {
  std::vector<double> out(ys.size());
  const std::size_t workers = engine.mode() == ReturnMode::numeric
                                  ? std::max<std::size_t>(1, std::min<std::size_t>(8, std::thread::hardware_concurrency()))
                                  : 1;
  const std::size_t chunk = (ys.size() + workers - 1) / workers;
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(ys.size(), begin + chunk);
    if (begin >= end) break;
    jobs.push_back(std::async(std::launch::async, [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) out[i] = engine.displacement(ys[i]);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace

CylinderScan find_cylinders(const ReturnEngine& engine, const CylinderSearch& search) {
  if (!(search.y_lo > 0.0) || !(search.y_hi > search.y_lo)) throw InvalidParams("find_cylinders: need 0 < y_lo < y_hi");
  if (search.grid_n < 100) throw InvalidParams("find_cylinders: grid_n must be >= 100");

  CylinderScan scan;
  scan.y_lo = search.y_lo;
  scan.y_hi = search.y_hi;
  const SmoothField& lower = engine.field().lower;
  const BumpSpec bump = lower.bump();

  // Semi-analytic displacements carry an exact sign; numeric ones are only
  // trusted above the integration noise.
  const double noise = engine.mode() == ReturnMode::numeric ? 1e-11 : 0.0;

  std::vector<double> ys(static_cast<std::size_t>(search.grid_n));
  for (int i = 0; i < search.grid_n; ++i) {
    ys[static_cast<std::size_t>(i)] = search.y_lo + (search.y_hi - search.y_lo) * i / (search.grid_n - 1);
  }
  const std::vector<double> d = evaluate_grid(engine, ys);

  const double edge = 1e-9 * search.y_hi;
  int last = -1;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!(std::abs(d[i]) > noise)) continue;
    if (last >= 0 && (d[static_cast<std::size_t>(last)] > 0.0) != (d[i] > 0.0)) {
      double lo = ys[static_cast<std::size_t>(last)];
      double hi = ys[i];
      const bool lo_positive = d[static_cast<std::size_t>(last)] > 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double dm = engine.displacement(mid);
        if (dm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((dm > 0.0) == lo_positive) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      if (root > search.y_lo + edge && root < search.y_hi - edge) {
        CylinderRecord r;
        r.radius = root;
        r.index = lower.y_perturbed() ? root_index(bump, root) : 0;
        // Roots located through the integrator carry its bias (about 1e-9 in y),
        // more than the fixed-point residual check allows.
        r.y_multiplier = std::abs(engine.phi2_implicit_residual(root, root)) < 1e-12 ? engine.phi2_derivative(root)
                                                                                    : engine.phi2_slope(root);
        if (r.y_multiplier != 1.0) {
          r.stability = r.y_multiplier < 1.0 ? CylinderStability::attractor : CylinderStability::repeller;
        } else {
          r.stability = xi_prime(bump, root) > 0.0 ? CylinderStability::attractor : CylinderStability::repeller;
        }
        r.detection = Detection::numeric;
        scan.records.push_back(r);
      }
    }
    last = static_cast<int>(i);
  }

  if (scan.records.empty()) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pick(search.y_lo, search.y_hi);
    bool flat = true;
    for (int p = 0; p < 10 && flat; ++p) flat = std::abs(engine.displacement(pick(rng))) < 1e-13;
    scan.degenerate_continuum = flat;
  }

  if (lower.y_perturbed() && search.analytic_tail > 0 && bump.eps != 0.0) {
    auto known = [&](double y) {
      return std::any_of(scan.records.begin(), scan.records.end(),
                         [&](const CylinderRecord& r) { return std::abs(r.radius - y) < 1e-9; });
    };
    std::vector<XiRoot> candidates;
    if (bump.rho == Rho::finite) {
      const auto all = xi_root_list(bump, bump.k);
      candidates.assign(all.rbegin(), all.rend());  // deepest last
    } else {
      const double e2 = bump.eps * bump.eps;
      const int j_start = std::max(1, static_cast<int>(std::floor(e2 / search.y_lo)));
      candidates = xi_root_list(bump, j_start + search.analytic_tail + 1);
    }
    int added = 0;
    for (const XiRoot& root : candidates) {
      if (added >= search.analytic_tail) break;
      if (root.y > search.y_lo + edge || known(root.y)) continue;
      CylinderRecord r;
      r.index = root.j;
      r.radius = root.y;
      r.y_multiplier = 2.0 * root.y / (2.0 * root.y + root.slope);
      // The closed-form slope has sign (-1)^j even where the bump underflows.
      r.stability = root.j % 2 == 0 ? CylinderStability::attractor : CylinderStability::repeller;
      r.detection = Detection::analytic_only;
      scan.records.push_back(r);
      ++added;
    }
  }
  return scan;
}

std::vector<CycleRecord> enumerate_limit_cycles(const FieldParams& params, const CycleOptions& options) {
  const Psvf z = make_family(FamilyTag::z_kl, params);
  const ReturnEngine engine(z, ReturnMode::semi_analytic, options.integrator);
  CylinderSearch search = default_cylinder_search(z.params, options.j_cutoff);
  search.grid_n = options.grid_n;
  search.analytic_tail = params.rho == Rho::infinite ? options.j_cutoff : 0;
  const CylinderScan cylinders = find_cylinders(engine, search);

  std::vector<CylinderRecord> kept;
  for (const CylinderRecord& c : cylinders.records) {
    if (params.rho == Rho::infinite && c.index > options.j_cutoff) continue;
    kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.index < b.index; });

  std::vector<CycleRecord> cycles;
  if (kept.empty()) return cycles;
  const auto planes = find_invariant_planes(z.params, 1.0);
  for (const PlaneRecord& plane : planes) {
    const double rate = z.params.lambda * product_poly(plane.location, z.params.mu, z.params.L).derivative;
    for (const CylinderRecord& c : kept) {
      CycleRecord r;
      r.plane_index = plane.index;
      r.cylinder_index = c.index;
      r.base = {plane.location, c.radius};
      r.x_multiplier = std::exp(2.0 * c.radius * rate);
      r.y_multiplier = c.y_multiplier;
      r.detection = c.detection;
      const bool x_attracts = rate < 0.0;
      const bool y_attracts = c.stability == CylinderStability::attractor;
      r.stability = x_attracts && y_attracts     ? CycleStability::attractor
                    : !x_attracts && !y_attracts ? CycleStability::repeller
                                                 : CycleStability::saddle_type;
      cycles.push_back(r);
    }
  }
  return cycles;
}

HyperbolicityReport verify_hyperbolicity(const CycleRecord& record, const ReturnEngine& engine) {
  if (record.detection == Detection::analytic_only) {
    throw InvalidParams("verify_hyperbolicity: analytic-only records cannot be checked numerically");
  }
  constexpr double step = 1e-5;
  const SigmaPoint b = record.base;
  const SigmaPoint xp = engine.full_return({b.x + step, b.y});
  const SigmaPoint xm = engine.full_return({b.x - step, b.y});
  const SigmaPoint yp = engine.full_return({b.x, b.y + step});
  const SigmaPoint ym = engine.full_return({b.x, b.y - step});

  HyperbolicityReport rep;
  rep.analytic_x = record.x_multiplier;
  rep.analytic_y = record.y_multiplier;
  rep.fd_x = (xp.x - xm.x) / (2.0 * step);
  rep.fd_y = (yp.y - ym.y) / (2.0 * step);
  if (std::abs(rep.fd_x - 1.0) < 1e-12 || std::abs(rep.fd_y - 1.0) < 1e-12) {
    throw NotHyperbolicNumerically("return-map multiplier indistinguishable from 1 at the base point");
  }
  rep.rel_err_x = std::abs(rep.fd_x - rep.analytic_x) / std::abs(rep.analytic_x);
  rep.rel_err_y = std::abs(rep.fd_y - rep.analytic_y) / std::abs(rep.analytic_y);
  rep.x_checked = std::abs(rep.analytic_x - 1.0) > 1e-7;
  rep.y_checked = std::abs(rep.analytic_y - 1.0) > 1e-7;
  const bool x_in = rep.fd_x < 1.0;
  const bool y_in = rep.fd_y < 1.0;
  rep.fd_stability = x_in && y_in     ? CycleStability::attractor
                     : !x_in && !y_in ? CycleStability::repeller
                                      : CycleStability::saddle_type;
  rep.ok = (!rep.x_checked || rep.rel_err_x <= 1e-4) && (!rep.y_checked || rep.rel_err_y <= 1e-4);
  return rep;
}

std::vector<EpsilonScan> scan_epsilon(const FieldParams& params, const std::vector<double>& eps_list, int grid_n,
                                      int j_cutoff) {
  for (double e : eps_list) {
    if (!std::isfinite(e) || e < -0.5 || e > 0.5) throw InvalidParams("scan_epsilon: eps values must lie in [-0.5, 0.5]");
  }
  std::vector<std::future<EpsilonScan>> jobs;
  for (double e : eps_list) {
    jobs.push_back(std::async(std::launch::async, [=] {
      FieldParams p = params;
      p.eps = e;
      const ReturnEngine engine(make_family(FamilyTag::z_eps, p), ReturnMode::semi_analytic);
      CylinderSearch search = default_cylinder_search(p, j_cutoff);
      search.grid_n = grid_n;
      search.analytic_tail = 0;
      return EpsilonScan{e, find_cylinders(engine, search)};
    }));
  }
  std::vector<EpsilonScan> out;
  for (auto& j : jobs) out.push_back(j.get());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.eps < b.eps; });
  return out;
}

}  // namespace psvf
