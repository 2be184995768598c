#include "helium/harness/csv.hpp"

#include <charconv>
#include <cmath>

#include "helium/errors.hpp"

namespace helium::harness {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double x = 0.0;
  const char* begin = s.data();
  if (!s.empty() && s[0] == '+') ++begin;
  const auto res = std::from_chars(begin, s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  return x;
}

std::int64_t parse_integer(const std::string& s) {
  std::int64_t x = 0;
  const char* begin = s.data();
  if (!s.empty() && s[0] == '+') ++begin;
  const auto res = std::from_chars(begin, s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("not an integer: '" + s + "'");
  }
  return x;
}

namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(const std::string& s) const { return quote_if_needed(s); }
  };
  return std::visit(Visitor{}, c);
}

std::string to_csv(const ResultSet& rs) {
  std::string out;
  for (std::size_t i = 0; i < rs.columns.size(); ++i) {
    if (i) out += ',';
    out += quote_if_needed(rs.columns[i].name);
  }
  out += '\n';
  for (const auto& row : rs.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, in_record = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    in_record = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      in_record = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw InvalidArgument("csv: unterminated quoted field");
  if (in_record) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<std::vector<Cell>> rows_from_csv(const std::string& text, const std::vector<Column>& columns) {
  const auto records = parse_csv(text);
  if (records.empty()) throw InvalidArgument("csv: missing header");
  if (records[0].size() != columns.size()) throw InvalidArgument("csv: header width differs from the schema");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (records[0][i] != columns[i].name) throw InvalidArgument("csv: unexpected column '" + records[0][i] + "'");
  }
  std::vector<std::vector<Cell>> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != columns.size()) throw InvalidArgument("csv: row " + std::to_string(r) + " has wrong width");
    std::vector<Cell> row;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const std::string& s = records[r][i];
      if (s.empty() && columns[i].type != ColumnType::Text) {
        row.emplace_back(std::monostate{});
      } else if (columns[i].type == ColumnType::Real) {
        row.emplace_back(parse_number(s));
      } else if (columns[i].type == ColumnType::Integer) {
        row.emplace_back(parse_integer(s));
      } else {
        row.emplace_back(s);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace helium::harness
