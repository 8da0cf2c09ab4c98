#pragma once

#include <iosfwd>
#include <string>

#include "itrd/matrix.hpp"

namespace itrd {

// Reads a rectangular table of reals from a CSV file. A single header row is
// tolerated and skipped when the first line contains any token that does not
// parse as a number. Ragged rows, empty cells, and non-finite values are
// reported as ParseError with one-based row/column positions.
Matrix read_feature_csv(const std::string& path);

// Same parser over an arbitrary stream; `origin` names the source in errors.
Matrix read_feature_csv(std::istream& in, const std::string& origin);

// Writes features with enough digits that read_feature_csv(write(m)) == m.
void write_feature_csv(const std::string& path, const Matrix& features);

void write_feature_csv(std::ostream& out, const Matrix& features);

}  // namespace itrd
