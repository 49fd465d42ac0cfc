#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "kreinkit/error.hpp"
#include "kreinkit/matrix.hpp"
#include "kreinkit/matrix_io.hpp"

using namespace kreinkit;

TEST_CASE("json text roundtrip is bit-exact") {
  ComplexMatrix m(2, 3);
  m(0, 0) = Complex(std::sqrt(2.0), -1.0 / 3.0);
  m(0, 1) = Complex(std::exp(1.0), 0.0);
  m(0, 2) = Complex(1e-300, 1e300);
  m(1, 0) = Complex(-0.1, 0.3);
  m(1, 1) = Complex(0.0, -2.5e-17);
  m(1, 2) = Complex(6.02214076e23, -273.15);

  const std::string text = matrix_to_json_text(m);
  const ComplexMatrix back = matrix_from_json_text(text);
  REQUIRE(back.rows() == 2);
  REQUIRE(back.cols() == 3);
  CHECK(max_abs_diff(m, back) == 0.0);
  // Not just equal: the same bits.
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(m(i, j).real() == back(i, j).real());
      CHECK(m(i, j).imag() == back(i, j).imag());
    }
  }

  // Serializing the parsed matrix reproduces the identical document.
  CHECK(matrix_to_json_text(back) == text);
}

TEST_CASE("role tag is optional and preserved") {
  const ComplexMatrix m = ComplexMatrix::identity(2);
  const std::string untagged = matrix_to_json_text(m);
  CHECK(matrix_role_from_json_text(untagged) == "");

  const std::string tagged = matrix_to_json_text(m, "fundamental-symmetry");
  CHECK(matrix_role_from_json_text(tagged) == "fundamental-symmetry");
  CHECK(max_abs_diff(matrix_from_json_text(tagged), m) == 0.0);
}

TEST_CASE("malformed documents raise ParseError") {
  const ComplexMatrix eye = ComplexMatrix::identity(1);
  CHECK_THROWS_AS(matrix_from_json_text("{"), ParseError);
  CHECK_THROWS_AS(matrix_from_json_text("[]"), ParseError);
  CHECK_THROWS_AS(matrix_from_json_text("{\"cols\": 1, \"entries\": [[1,0]]}"),
                  ParseError);
  CHECK_THROWS_AS(matrix_from_json_text(
                      "{\"rows\": 0, \"cols\": 1, \"entries\": []}"),
                  ParseError);
  CHECK_THROWS_AS(matrix_from_json_text(
                      "{\"rows\": -2, \"cols\": 1, \"entries\": [[1,0]]}"),
                  ParseError);
  CHECK_THROWS_AS(matrix_from_json_text(
                      "{\"rows\": 1.5, \"cols\": 1, \"entries\": [[1,0]]}"),
                  ParseError);
  CHECK_THROWS_AS(matrix_from_json_text("{\"rows\": 1, \"cols\": 1}"),
                  ParseError);
  CHECK_THROWS_AS(matrix_from_json_text(
                      "{\"rows\": 2, \"cols\": 2, \"entries\": [[1,0]]}"),
                  ParseError);
  CHECK_THROWS_AS(matrix_from_json_text(
                      "{\"rows\": 1, \"cols\": 1, \"entries\": [[1]]}"),
                  ParseError);
  CHECK_THROWS_AS(matrix_from_json_text(
                      "{\"rows\": 1, \"cols\": 1, \"entries\": [[1, \"i\"]]}"),
                  ParseError);
  CHECK_THROWS_AS(matrix_from_json_text(
                      "{\"rows\": 1, \"cols\": 1, \"entries\": [7]}"),
                  ParseError);
  CHECK_THROWS_AS(load_matrix("no_such_file_anywhere.json"), ParseError);

  // Error messages carry the offending quantity.
  try {
    matrix_from_json_text("{\"rows\": 2, \"cols\": 2, \"entries\": [[1,0]]}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("expected 2 x 2") != std::string::npos);
  }
  (void)eye;
}

TEST_CASE("file roundtrip preserves matrix and role") {
  ComplexMatrix m(2, 2);
  m(0, 0) = Complex(0.5, 0.0);
  m(0, 1) = Complex(0.0, std::sqrt(3.0));
  m(1, 0) = Complex(-1.0 / 7.0, 2.0);
  m(1, 1) = Complex(4.0, -4.0);

  const std::string path = "test_matrix_io_roundtrip.json";
  save_matrix(path, m, "operand");
  const ComplexMatrix back = load_matrix(path);
  CHECK(max_abs_diff(m, back) == 0.0);

  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(matrix_role_from_json_text(text) == "operand");
  std::remove(path.c_str());

  // A file that exists but holds a truncated document names the path.
  const std::string bad_path = "test_matrix_io_truncated.json";
  {
    std::ofstream out(bad_path);
    out << "{\"rows\": 2,";
  }
  try {
    load_matrix(bad_path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(bad_path) != std::string::npos);
  }
  std::remove(bad_path.c_str());
}
