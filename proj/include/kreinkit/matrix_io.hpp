#pragma once

#include <string>

#include "kreinkit/matrix.hpp"

namespace kreinkit {

/// JSON matrix files.  The document is an object with
///   rows:    positive integer
///   cols:    positive integer
///   entries: array of rows*cols [re, im] pairs, row-major
///   role:    optional free-form string tag, preserved on rewrite
/// Values are written with enough digits to round-trip doubles exactly.
/// Malformed documents raise ParseError naming what is wrong.

ComplexMatrix matrix_from_json_text(const std::string& text);
std::string matrix_to_json_text(const ComplexMatrix& m,
                                const std::string& role = "");

/// File variants; a missing or unreadable path is a ParseError too.
ComplexMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const ComplexMatrix& m,
                 const std::string& role = "");

/// The role tag of a document, or "" when absent.
std::string matrix_role_from_json_text(const std::string& text);

}  // namespace kreinkit
