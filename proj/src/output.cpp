#include "psvf/output.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

namespace psvf {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
  } visit;
  return std::visit(visit, c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
  }
  if (std::holds_alternative<long long>(c)) return std::get<long long>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

}  // namespace

void write_csv(std::ostream& os, const Table& table, const RunConfig& cfg) {
  for (const auto& [k, v] : resolved_settings(cfg)) os << "# " << k << "=" << v << "\n";
  for (const auto& s : table.summary) os << "# summary " << s << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << csv_escape(table.columns[i]);
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
    os << "\n";
  }
}

void write_json(std::ostream& os, const Table& table, const RunConfig& cfg) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : resolved_settings(cfg)) config[k] = v;
  doc["config"] = config;
  doc["summary"] = table.summary;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) r[table.columns[i]] = cell_json(row[i]);
    rows.push_back(r);
  }
  doc["rows"] = rows;
  os << doc.dump(2) << "\n";
}

void write_table(std::ostream& os, const Table& table, const RunConfig& cfg) {
  if (cfg.format == OutputFormat::json) {
    write_json(os, table, cfg);
  } else {
    write_csv(os, table, cfg);
  }
}

std::string plot_script(const std::string& data_path, const std::string& x_column, const std::string& y_column) {
  return "import csv\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n\n"
         "with open(" + nlohmann::json(data_path).dump() + ") as fh:\n"
         "    rows = list(csv.DictReader(line for line in fh if not line.startswith(\"#\")))\n"
         "xs = [float(r[" + nlohmann::json(x_column).dump() + "]) for r in rows]\n"
         "ys = [float(r[" + nlohmann::json(y_column).dump() + "]) for r in rows]\n"
         "plt.plot(xs, ys, lw=0.8)\n"
         "plt.xlabel(" + nlohmann::json(x_column).dump() + ")\n"
         "plt.ylabel(" + nlohmann::json(y_column).dump() + ")\n"
         "plt.savefig(" + nlohmann::json(data_path + ".png").dump() + ", dpi=150)\n";
}

}  // namespace psvf
