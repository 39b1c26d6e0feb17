#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qlrs {

// Labeled numeric grid emitted by the CLI. Cells are numbers or short labels;
// both serializations format numbers identically (9 significant digits) so
// CSV and JSON carry the same numeric content.
struct SweepTable {
  using Cell = std::variant<double, std::string>;

  std::vector<std::string> columns;                         // labels incl. units
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;  // ordered key/value

  void add_metadata(const std::string& key, const std::string& value);
  void add_metadata(const std::string& key, double value);

  // '#'-prefixed metadata lines, then an RFC-4180 body: header row, '.'
  // decimals, UTF-8, LF line endings.
  std::string to_csv() const;
  std::string to_json() const;
};

// Shortest representation with 9 significant digits.
std::string format_sig9(double v);

}  // namespace qlrs
