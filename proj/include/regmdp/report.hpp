#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace regmdp {

/// Output file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// Homogeneous records: every row has one cell per column.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}
  /// Throws std::invalid_argument on a width mismatch.
  void add(std::vector<Cell> row);
};

/// Doubles with 12 significant digits ("%.12g"), booleans as true/false.
std::string format_cell(const Cell& cell);

/// RFC-4180 text: comma separated, CRLF line ends, fields quoted when they
/// contain a comma, quote or line break.
std::string to_csv(const Table& table);

/// Writes to_csv(table) to path. Throws IoError.
void emit_csv(const Table& table, const std::string& path);

/// Writes pretty-printed JSON. Throws IoError.
void write_json(const nlohmann::json& doc, const std::string& path);

/// Splits RFC-4180 text back into string fields, header row first.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace regmdp
