#ifndef CHOLPARAM_MATRIX_IO_HPP
#define CHOLPARAM_MATRIX_IO_HPP

// Matrix interchange formats.
//
// CSV: one matrix row per line, values separated by ',', no header, '.' as
// the decimal point. Blank lines and a trailing newline are ignored; every
// row must have the same number of fields.
//
// JSON: {"n": <int>, "rows": [[...], ...]} where n is the number of columns.
//
// Numbers are written in the shortest form that parses back to the same
// double (std::to_chars), so print -> parse is lossless.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "cholparam/errors.hpp"
#include "cholparam/matrix_core.hpp"

namespace cholparam {

class ParseError : public Error {
 public:
  using Error::Error;
};

enum class MatrixFormat { csv, json };

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}
}  // namespace detail

inline Matrix parse_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    std::size_t fields = 0;
    while (true) {
      const auto comma = line.find(',');
      const auto field = detail::trim(line.substr(0, comma));
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size() ||
          !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
      }
      values.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) cols = fields;
    if (fields != cols) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                       " fields, got " + std::to_string(fields));
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("empty matrix");
  return Matrix(rows, cols, std::move(values));
}

inline Matrix parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("rows") ||
      !doc["n"].is_number_integer() || !doc["rows"].is_array()) {
    throw ParseError("JSON matrix must be an object {\"n\": int, \"rows\": [[...]]}");
  }
  const auto cols = doc["n"].get<long long>();
  const auto& rows = doc["rows"];
  if (cols < 1 || rows.empty()) throw ParseError("empty matrix");
  std::vector<double> values;
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<long long>(row.size()) != cols) {
      throw ParseError("every JSON row must have n entries");
    }
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("JSON matrix entries must be numbers");
      values.push_back(v.get<double>());
    }
  }
  return Matrix(rows.size(), static_cast<std::size_t>(cols), std::move(values));
}

/// JSON when the first non-blank character is '{', CSV otherwise.
inline Matrix parse_matrix(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
  return parse_csv(text);
}

inline Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_matrix(text);
}

inline std::string to_csv(const Matrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::json to_json_value(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return {{"n", m.cols()}, {"rows", std::move(rows)}};
}

inline std::string to_json(const Matrix& m) { return to_json_value(m).dump() + "\n"; }

inline std::string format_matrix(const Matrix& m, MatrixFormat f) {
  return f == MatrixFormat::json ? to_json(m) : to_csv(m);
}

}  // namespace cholparam

#endif  // CHOLPARAM_MATRIX_IO_HPP
