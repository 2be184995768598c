#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace helium::harness {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);
/// Full-token parse; throws InvalidArgument on trailing garbage.
double parse_number(const std::string& s);
std::int64_t parse_integer(const std::string& s);

enum class ColumnType { Real, Integer, Text };

/// Empty (monostate) cells are written as nothing between the commas.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Column {
  std::string name;
  ColumnType type;
  bool operator==(const Column&) const = default;
};

struct ResultSet {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> provenance;  // one entry per row
};

std::string format_cell(const Cell& c);
std::string to_csv(const ResultSet& rs);

/// Splits CSV text into records (RFC 4180 quoting).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// Rebuilds typed rows from CSV text, using `columns` for the cell types.
/// Throws InvalidArgument if the header does not match.
std::vector<std::vector<Cell>> rows_from_csv(const std::string& text, const std::vector<Column>& columns);

}  // namespace helium::harness
