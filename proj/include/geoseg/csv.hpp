#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "geoseg/error.hpp"

namespace geoseg::csv {

/// Splits one line on commas. Double-quoted fields may contain commas and
/// "" escapes; no multi-line fields.
inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  for (auto& f : fields) {
    const auto first = f.find_first_not_of(" \t");
    const auto last = f.find_last_not_of(" \t");
    f = first == std::string::npos ? std::string{} : f.substr(first, last - first + 1);
  }
  return fields;
}

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Header-addressed table. Row line numbers are 1-based file lines.
class Table {
 public:
  Table(std::string source, std::vector<std::string> header, std::vector<Row> rows)
      : source_(std::move(source)), header_(std::move(header)), rows_(std::move(rows)) {
    for (std::size_t i = 0; i < header_.size(); ++i) columns_[header_[i]] = i;
  }

  const std::string& source() const noexcept { return source_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  bool has(const std::string& column) const { return columns_.count(column) > 0; }

  std::size_t column(const std::string& name) const {
    auto it = columns_.find(name);
    if (it == columns_.end()) {
      throw Error(ErrorKind::MalformedRow, source_ + ": line 1: missing column '" + name + "'");
    }
    return it->second;
  }

  [[noreturn]] void fail(const Row& row, const std::string& reason) const {
    throw Error(ErrorKind::MalformedRow, source_ + ": line " + std::to_string(row.line) + ": " + reason);
  }

  const std::string& text(const Row& row, std::size_t col) const { return row.fields[col]; }

  double number(const Row& row, std::size_t col) const {
    const std::string& field = row.fields[col];
    double value = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end) {
      fail(row, "'" + field + "' is not a number in column '" + header_[col] + "'");
    }
    return value;
  }

  std::optional<double> optional_number(const Row& row, std::size_t col) const {
    if (row.fields[col].empty()) return std::nullopt;
    return number(row, col);
  }

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, std::size_t> columns_;
};

inline Table parse(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::MalformedRow, source + ": line " + std::to_string(line_no) + ": expected " +
                                               std::to_string(header.size()) + " fields, got " +
                                               std::to_string(fields.size()));
    }
    rows.push_back({line_no, std::move(fields)});
  }
  if (header.empty()) throw Error(ErrorKind::MalformedRow, source + ": missing header row");
  return Table(source, std::move(header), std::move(rows));
}

inline Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return parse(in, path);
}

inline Table parse_text(const std::string& text, const std::string& source = "<memory>") {
  std::istringstream in(text);
  return parse(in, source);
}

/// Shortest round-trip decimal form.
inline std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

inline std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace geoseg::csv
