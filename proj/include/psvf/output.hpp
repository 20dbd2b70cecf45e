#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "psvf/config.hpp"

namespace psvf {

/// A cell is a real, an integer, text, or empty.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> summary;  // free-form lines, e.g. "planes=2 cylinders=2 cycles=4"
};

/// RFC-4180 quoting: wrap in quotes when the field holds a comma, quote, CR or LF.
std::string csv_escape(const std::string& field);

/// CSV: `# key=value` lines for the resolved config, `# summary` lines, then the
/// header and rows. Reals use 17 significant digits.
void write_csv(std::ostream& os, const Table& table, const RunConfig& cfg);

/// JSON object {"config": {...}, "summary": [...], "columns": [...], "rows": [{...}]}.
void write_json(std::ostream& os, const Table& table, const RunConfig& cfg);

void write_table(std::ostream& os, const Table& table, const RunConfig& cfg);

/// Minimal matplotlib script plotting two columns of a CSV output.
std::string plot_script(const std::string& data_path, const std::string& x_column, const std::string& y_column);

}  // namespace psvf
