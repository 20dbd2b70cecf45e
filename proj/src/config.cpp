#include "psvf/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

namespace psvf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(out)) {
    throw InvalidParams("invalid real value '" + v + "' for " + key);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size()) throw InvalidParams("invalid integer value '" + v + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw InvalidParams("invalid boolean value '" + v + "' for " + key);
}

std::vector<double> parse_list(const std::string& key, const std::string& v, char sep) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_real(key, item));
  return out;
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "family") {
    cfg.family = family_from_string(value);
  } else if (key == "lambda") {
    cfg.params.lambda = parse_real(key, value);
  } else if (key == "mu") {
    cfg.params.mu = parse_real(key, value);
  } else if (key == "L") {
    cfg.params.L = parse_int(key, value);
  } else if (key == "eps") {
    cfg.params.eps = parse_real(key, value);
  } else if (key == "k") {
    cfg.params.k = parse_int(key, value);
  } else if (key == "rho") {
    if (value == "f") {
      cfg.params.rho = Rho::finite;
    } else if (value == "i") {
      cfg.params.rho = Rho::infinite;
    } else {
      throw InvalidParams("rho must be 'f' or 'i'");
    }
  } else if (key == "rel_tol") {
    cfg.integrator.rel_tol = parse_real(key, value);
  } else if (key == "abs_tol") {
    cfg.integrator.abs_tol = parse_real(key, value);
  } else if (key == "max_step") {
    cfg.integrator.max_step = parse_real(key, value);
  } else if (key == "event_tol") {
    cfg.integrator.event_tol = parse_real(key, value);
  } else if (key == "max_flight_time") {
    cfg.integrator.max_flight_time = parse_real(key, value);
  } else if (key == "start") {
    const auto v = parse_list(key, value, ',');
    if (v.size() != 3) throw InvalidParams("start must be x,y,z");
    cfg.start = State3(v[0], v[1], v[2]);
  } else if (key == "returns") {
    cfg.returns = parse_int(key, value);
    if (*cfg.returns < 1) throw InvalidParams("returns must be >= 1");
  } else if (key == "time") {
    cfg.time = parse_real(key, value);
    if (*cfg.time < 0.0) throw InvalidParams("time must be >= 0");
  } else if (key == "y_range") {
    const auto v = parse_list(key, value, ':');
    if (v.size() != 2 || !(v[0] > 0.0) || !(v[1] > v[0])) throw InvalidParams("y_range must be A:B with 0 < A < B");
    cfg.y_range = std::pair{v[0], v[1]};
  } else if (key == "grid") {
    cfg.grid = parse_int(key, value);
    if (cfg.grid < 2) throw InvalidParams("grid must be >= 2");
  } else if (key == "y_ref") {
    cfg.y_ref = parse_real(key, value);
  } else if (key == "j_cutoff") {
    cfg.j_cutoff = parse_int(key, value);
    if (cfg.j_cutoff < 1) throw InvalidParams("j_cutoff must be >= 1");
  } else if (key == "eps_list") {
    cfg.eps_list = parse_list(key, value, ',');
  } else if (key == "verify") {
    cfg.verify = parse_bool(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "format") {
    if (value == "csv") {
      cfg.format = OutputFormat::csv;
    } else if (value == "json") {
      cfg.format = OutputFormat::json;
    } else {
      throw InvalidParams("format must be csv or json");
    }
  } else if (key == "plot_script") {
    cfg.plot_script = value;
  } else {
    throw InvalidParams("unknown config key '" + key + "'");
  }
}

void load_config(RunConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InvalidParams("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(cfg, t.substr(0, eq), t.substr(eq + 1));
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open config file '" + path + "'");
  load_config(cfg, in);
}

void validate(const RunConfig& cfg) {
  validate(cfg.family, cfg.params);
  cfg.integrator.validate();
}

std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& cfg) {
  const FieldParams& p = cfg.params;
  std::vector<std::pair<std::string, std::string>> kv{
      {"family", std::string(to_string(cfg.family))},
      {"lambda", format_real(p.lambda)},
      {"mu", format_real(p.mu)},
      {"L", std::to_string(p.L)},
      {"eps", format_real(p.eps)},
      {"rho", p.rho == Rho::finite ? "f" : "i"},
      {"k", std::to_string(p.k)},
      {"rel_tol", format_real(cfg.integrator.rel_tol)},
      {"abs_tol", format_real(cfg.integrator.abs_tol)},
      {"max_step", format_real(cfg.integrator.max_step)},
      {"event_tol", format_real(cfg.integrator.event_tol)},
      {"max_flight_time", format_real(cfg.integrator.max_flight_time)},
      {"start", format_real(cfg.start.x()) + "," + format_real(cfg.start.y()) + "," + format_real(cfg.start.z())},
      {"returns", cfg.returns ? std::to_string(*cfg.returns) : ""},
      {"time", cfg.time ? format_real(*cfg.time) : ""},
      {"y_range", cfg.y_range ? format_real(cfg.y_range->first) + ":" + format_real(cfg.y_range->second) : ""},
      {"grid", std::to_string(cfg.grid)},
      {"y_ref", format_real(cfg.y_ref)},
      {"j_cutoff", std::to_string(cfg.j_cutoff)},
  };
  std::string eps;
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) eps += (i ? "," : "") + format_real(cfg.eps_list[i]);
  kv.emplace_back("eps_list", eps);
  kv.emplace_back("verify", cfg.verify ? "true" : "false");
  kv.emplace_back("format", cfg.format == OutputFormat::csv ? "csv" : "json");
  return kv;
}

}  // namespace psvf
