#include "itrd/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "itrd/errors.hpp"

namespace itrd {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(std::string_view token, double& out) {
  if (token.empty()) return false;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (*begin == '+') {  // from_chars rejects an explicit plus sign
    ++begin;
    if (begin == end || *begin == '+' || *begin == '-') return false;
  }
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc{} && result.ptr == end && std::isfinite(out);
}

[[noreturn]] void fail(const std::string& origin, std::size_t row, std::size_t col,
                       const std::string& what) {
  std::ostringstream msg;
  msg << origin << ": row " << row << ", column " << col << ": " << what;
  throw ParseError(msg.str());
}

}  // namespace

Matrix read_feature_csv(std::istream& in, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::size_t expected_cols = 0;
  std::size_t line_no = 0;
  bool header_checked = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> values(fields.size());
    if (!header_checked) {
      header_checked = true;
      bool all_numeric = true;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!parse_double(fields[i], values[i])) {
          all_numeric = false;
          break;
        }
      }
      if (!all_numeric) continue;  // header row
      expected_cols = fields.size();
      rows.push_back(std::move(values));
      continue;
    }
    if (expected_cols == 0) expected_cols = fields.size();
    if (fields.size() != expected_cols) {
      fail(origin, line_no, fields.size(),
           "expected " + std::to_string(expected_cols) + " fields, found " +
               std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!parse_double(fields[i], values[i])) {
        fail(origin, line_no, i + 1,
             "cannot parse '" + std::string(fields[i]) + "' as a finite real");
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(origin + ": no data rows");
  return Matrix::from_rows(rows);
}

Matrix read_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_feature_csv(in, path);
}

void write_feature_csv(std::ostream& out, const Matrix& features) {
  char buf[64];
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (std::size_t j = 0; j < features.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", features(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_feature_csv(const std::string& path, const Matrix& features) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  write_feature_csv(out, features);
  out.flush();
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace itrd
