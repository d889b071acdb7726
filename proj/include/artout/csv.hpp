#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "artout/core/dataset.hpp"
#include "artout/core/error.hpp"

namespace artout::csv {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("cannot format number");
  return {buf, ptr};
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path);
}

inline std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = nl + 1;
  }
  return out;
}

/**
 * Parses a comma-separated table with a header row. Every column except
 * `label_column` must be numeric and finite; rows whose label equals
 * `outlier_value` are outliers, everything else is normal. All rows are
 * genuine. An empty `label_column` reads an unlabeled table (all normal).
 */
inline Dataset parse(std::string_view text, const std::string& label_column,
                     const std::string& outlier_value, const std::string& source = "<input>") {
  auto all = lines(text);
  std::size_t first = 0;
  while (first < all.size() && trim(all[first]).empty()) ++first;
  if (first == all.size()) throw ParseError(source + ": missing header row");

  const auto header = split_line(all[first]);
  std::ptrdiff_t label_idx = -1;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (!label_column.empty() && header[j] == label_column) {
      label_idx = static_cast<std::ptrdiff_t>(j);
    } else {
      names.emplace_back(header[j]);
    }
  }
  if (!label_column.empty() && label_idx < 0)
    throw ParseError(source + ": missing label column '" + label_column + "'");

  Dataset data(names);
  std::vector<double> values(names.size());
  for (std::size_t li = first + 1; li < all.size(); ++li) {
    if (trim(all[li]).empty()) continue;
    const auto cells = split_line(all[li]);
    const std::size_t row_no = li + 1;
    if (cells.size() != header.size()) {
      throw ParseError(source + ": line " + std::to_string(row_no) + " has " +
                       std::to_string(cells.size()) + " cells, header has " +
                       std::to_string(header.size()));
    }
    Label label = Label::normal;
    std::size_t k = 0;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (static_cast<std::ptrdiff_t>(j) == label_idx) {
        label = cells[j] == outlier_value ? Label::outlier : Label::normal;
        continue;
      }
      double v = 0.0;
      if (!parse_double(cells[j], v)) {
        throw ParseError(source + ": line " + std::to_string(row_no) + ", column '" +
                         std::string(header[j]) + "': not a number: '" + std::string(cells[j]) + "'");
      }
      if (!std::isfinite(v)) {
        throw ParseError(source + ": line " + std::to_string(row_no) + ", column '" +
                         std::string(header[j]) + "': non-finite value '" + std::string(cells[j]) + "'");
      }
      values[k++] = v;
    }
    data.add_row(values, label, Provenance::genuine);
  }
  return data;
}

inline Dataset load(const std::string& path, const std::string& label_column,
                    const std::string& outlier_value) {
  return parse(read_file(path), label_column, outlier_value, path);
}

// Writes attributes followed by a label column holding "normal"/"outlier".
inline std::string format(const Dataset& data, const std::string& label_column = "label") {
  std::string out;
  for (std::size_t j = 0; j < data.dim(); ++j) {
    if (j) out += ',';
    out += data.attribute_names()[j];
  }
  if (!label_column.empty()) {
    if (data.dim()) out += ',';
    out += label_column;
  }
  out += '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
      if (j) out += ',';
      out += format_double(data.at(i, j));
    }
    if (!label_column.empty()) {
      if (data.dim()) out += ',';
      out += to_string(data.label(i));
    }
    out += '\n';
  }
  return out;
}

inline void save(const Dataset& data, const std::string& path, const std::string& label_column = "label") {
  write_file(path, format(data, label_column));
}

}  // namespace artout::csv
