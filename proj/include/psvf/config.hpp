#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psvf/field.hpp"
#include "psvf/flow.hpp"

namespace psvf {

enum class OutputFormat { csv, json };

/// Everything a CLI command needs. Parsed from a flat key=value file; command
/// line flags override file values.
struct RunConfig {
  FamilyTag family = FamilyTag::z_kl;
  FieldParams params{};
  IntegratorConfig integrator{};

  State3 start{0.0, 0.5, 0.0};
  std::optional<int> returns;
  std::optional<double> time;

  std::optional<std::pair<double, double>> y_range;
  int grid = 2000;
  double y_ref = 0.4;
  int j_cutoff = 3;
  std::vector<double> eps_list;
  bool verify = false;

  std::string out;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  std::string plot_script;
};

/// Assigns one key. Throws InvalidParams for unknown keys or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key = value` lines; blank lines and lines starting with '#' are skipped.
void load_config(RunConfig& cfg, std::istream& in);
void load_config_file(RunConfig& cfg, const std::string& path);

/// Family and integrator validation.
void validate(const RunConfig& cfg);

/// Resolved configuration in a fixed key order, values formatted for output.
std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& cfg);

std::string format_real(double v);

}  // namespace psvf
