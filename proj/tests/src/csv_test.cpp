#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "itrd/csv.hpp"
#include "itrd/errors.hpp"
#include "itrd/matrix.hpp"
#include "itrd/rng.hpp"

using namespace itrd;

namespace {

Matrix parse(const std::string& text) {
  std::istringstream in(text);
  return read_feature_csv(in, "test");
}

std::string error_text(const std::string& text) {
  std::istringstream in(text);
  try {
    read_feature_csv(in, "test");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("plain numeric table parses") {
  const Matrix m = parse("1,2,3\n4,5,6\n");
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 2) == 6.0);
}

TEST_CASE("header row is detected and skipped") {
  const Matrix m = parse("x,y,label\n1.5,-2,0\n0.5,3,1\n");
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 3);
  CHECK(m(0, 0) == 1.5);
  CHECK(m(1, 1) == 3.0);

  // a fully numeric first line is data, not a header
  const Matrix n = parse("7,8\n1,2\n");
  CHECK(n.rows() == 2);
  CHECK(n(0, 1) == 8.0);
}

TEST_CASE("exponent and sign formats round through") {
  const Matrix m = parse("1e3,-2.5E-4,+0.125\n-1e-300,0,42\n");
  CHECK(m(0, 0) == 1000.0);
  CHECK(m(0, 1) == -2.5e-4);
  CHECK(m(0, 2) == 0.125);
  CHECK(m(1, 0) == -1e-300);
}

TEST_CASE("crlf line endings and a trailing newline-free last row parse") {
  const Matrix m = parse("1,2\r\n3,4\r\n5,6");
  REQUIRE(m.rows() == 3);
  CHECK(m(2, 1) == 6.0);
}

TEST_CASE("ragged rows report one-based positions") {
  const std::string msg = error_text("1,2,3\n4,5\n");
  CHECK(msg.find("row 2") != std::string::npos);
  CHECK(msg.find("test") != std::string::npos);
}

TEST_CASE("bad cells report row and column") {
  const std::string msg = error_text("1,2\n3,oops\n");
  CHECK(msg.find("row 2") != std::string::npos);
  CHECK(msg.find("column 2") != std::string::npos);
}

TEST_CASE("non-finite and empty cells are rejected") {
  CHECK_THROWS_AS(parse("1,2\n3,nan\n"), ParseError);
  CHECK_THROWS_AS(parse("1,2\ninf,4\n"), ParseError);
  CHECK_THROWS_AS(parse("1,,3\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("x,y\n"), ParseError);  // header but no data
  CHECK_THROWS_AS(read_feature_csv("/nonexistent/path.csv"), ParseError);
}

TEST_CASE("write then read is an exact round trip") {
  Rng rng(61);
  Matrix m(9, 4);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = std::exp(8.0 * rng.normal());
  m(0, 0) = 0.1;  // no exact binary representation
  m(1, 1) = -3.0;
  m(2, 2) = 1e-300;
  m(3, 3) = 12345678901234567.0;

  std::ostringstream out;
  write_feature_csv(out, m);
  const Matrix back = parse(out.str());
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("file-path overloads round trip through disk") {
  const std::string path = std::string(ITRD_TMP_DIR) + "/csv_roundtrip.csv";
  const Matrix m = Matrix::from_rows({{1.25, -7.0}, {0.1, 3e22}});
  write_feature_csv(path, m);
  const Matrix back = read_feature_csv(path);
  REQUIRE(back.rows() == 2);
  CHECK(back(0, 0) == 1.25);
  CHECK(back(0, 1) == -7.0);
  CHECK(back(1, 0) == 0.1);
  CHECK(back(1, 1) == 3e22);
}
