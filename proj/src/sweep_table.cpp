#include "qlrs/sweep_table.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace qlrs {

std::string format_sig9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf);
}

void SweepTable::add_metadata(const std::string& key, const std::string& value) {
  metadata.emplace_back(key, value);
}

void SweepTable::add_metadata(const std::string& key, double value) {
  metadata.emplace_back(key, format_sig9(value));
}

namespace {

std::string csv_escape(const std::string& s) {
  bool needs_quotes = false;
  for (char c : s) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string SweepTable::to_csv() const {
  std::ostringstream os;
  for (const auto& [k, v] : metadata) {
    os << "# " << k << "=" << v << "\n";
  }
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) os << ",";
    os << csv_escape(columns[i]);
  }
  os << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      if (std::holds_alternative<double>(row[i])) {
        os << format_sig9(std::get<double>(row[i]));
      } else {
        os << csv_escape(std::get<std::string>(row[i]));
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string SweepTable::to_json() const {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["metadata"] = ordered_json::object();
  for (const auto& [k, v] : metadata) doc["metadata"][k] = v;
  doc["columns"] = columns;
  doc["rows"] = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json jr = ordered_json::array();
    for (const auto& cell : row) {
      if (std::holds_alternative<double>(cell)) {
        // round-trip through the 9-digit form so CSV and JSON agree exactly
        jr.push_back(std::stod(format_sig9(std::get<double>(cell))));
      } else {
        jr.push_back(std::get<std::string>(cell));
      }
    }
    doc["rows"].push_back(std::move(jr));
  }
  return doc.dump(2) + "\n";
}

}  // namespace qlrs
