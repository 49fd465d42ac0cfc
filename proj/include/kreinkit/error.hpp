#pragma once

#include <stdexcept>
#include <string>

namespace kreinkit {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shape or index mismatch between operands.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// An operation's mathematical hypothesis does not hold for the given
/// operands (non-Hermitian input where Hermitian is required, operator not a
/// J-contraction, spectrum touching an excluded point of f, ...).  Carries a
/// short machine-readable name for the violated hypothesis.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string hypothesis, const std::string& msg)
      : Error(msg), hypothesis_(std::move(hypothesis)) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }

 private:
  std::string hypothesis_;
};

/// A kernel could not certify its result (iteration budget exhausted,
/// ill-conditioned eigenbasis, residual check failed).  The computation is
/// inconclusive rather than wrong.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// Malformed input file or unparseable argument.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

}  // namespace kreinkit
