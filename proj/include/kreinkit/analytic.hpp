#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kreinkit/matrix.hpp"

namespace kreinkit {

/// Scalar analytic function with an operational domain descriptor: the
/// plane minus finitely many excluded points (poles).  The registry
/// grammar is "poly:c0,c1,...", "exp", "inv", and
/// "rational:n0,n1,.../d0,d1,..." with real coefficients in ascending
/// degree order.
class AnalyticFunction {
 public:
  enum class Kind { polynomial, exponential, inverse, rational };

  static AnalyticFunction polynomial(std::vector<double> coeffs);
  static AnalyticFunction exponential();
  static AnalyticFunction inverse();
  static AnalyticFunction rational(std::vector<double> numerator,
                                   std::vector<double> denominator);
  /// Parses a registry name; throws ParseError on any malformed input.
  static AnalyticFunction parse(const std::string& registry_name);

  /// Scalar evaluation.  Throws HypothesisError when the value is not
  /// finite (evaluation at or numerically on a pole).
  Complex evaluate(Complex z) const;

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Complex>& excluded_points() const noexcept {
    return excluded_;
  }
  bool real_on_real() const noexcept { return true; }  // whole registry is

  /// Declared value at zero.  For the inverse this is the stored constant
  /// 0 (the convention of the toolkit's inverse-function instance), which
  /// deliberately does NOT make the function analytic at 0: contour and
  /// hypothesis machinery still treat 0 as excluded.
  std::optional<Complex> value_at_zero() const;

  /// True when z is at least `clearance` away from every excluded point.
  bool admissible(Complex z, double clearance) const;
  /// Distance from z to the nearest excluded point (infinity if none).
  double distance_to_excluded(Complex z) const;

  /// Coefficients for the matrix driver (ascending degree).
  const std::vector<double>& numerator() const noexcept { return num_; }
  const std::vector<double>& denominator() const noexcept { return den_; }

 private:
  AnalyticFunction() = default;

  Kind kind_ = Kind::polynomial;
  std::string name_;
  std::vector<double> num_;       // polynomial / numerator coefficients
  std::vector<double> den_;       // rational denominator coefficients
  std::vector<Complex> excluded_;
};

/// Horner evaluation of a real-coefficient polynomial at a complex point.
Complex horner(const std::vector<double>& coeffs, Complex z);

/// Horner evaluation of the matrix polynomial sum c_k A^k.
ComplexMatrix horner(const std::vector<double>& coeffs, const ComplexMatrix& a);

/// Roots of a real-coefficient polynomial (ascending coefficients) via the
/// companion matrix; leading zero coefficients are stripped first.
std::vector<Complex> polynomial_roots(const std::vector<double>& coeffs);

}  // namespace kreinkit
