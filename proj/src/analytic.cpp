#include "kreinkit/analytic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kreinkit/error.hpp"
#include "kreinkit/linalg.hpp"

namespace kreinkit {

namespace {

std::vector<double> parse_coeff_list(const std::string& text,
                                     const std::string& registry_name) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string token = text.substr(pos, comma - pos);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.empty()) {
      throw ParseError("bad coefficient '" + token + "' in function '" +
                       registry_name + "'");
    }
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

std::string join_coeffs(const std::vector<double>& coeffs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ",";
    os << coeffs[i];
  }
  return os.str();
}

bool effectively_zero(const std::vector<double>& coeffs) {
  for (double c : coeffs) {
    if (c != 0.0) return false;
  }
  return true;
}

}  // namespace

Complex horner(const std::vector<double>& coeffs, Complex z) {
  Complex acc(0.0, 0.0);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

ComplexMatrix horner(const std::vector<double>& coeffs, const ComplexMatrix& a) {
  if (!a.square()) throw DimensionError("horner: matrix must be square");
  const std::size_t n = a.rows();
  ComplexMatrix acc(n, n);
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = acc * a;
    acc += coeffs[i] * ComplexMatrix::identity(n);
  }
  return acc;
}

std::vector<Complex> polynomial_roots(const std::vector<double>& coeffs) {
  std::vector<double> c = coeffs;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.size() <= 1) return {};  // constants have no roots of interest
  const std::size_t d = c.size() - 1;
  // Companion matrix of the monic polynomial sum (c_k / c_d) z^k + z^d.
  ComplexMatrix comp(d, d);
  for (std::size_t i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
  return spectrum(comp);
}

AnalyticFunction AnalyticFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ParseError("polynomial needs at least one coefficient");
  AnalyticFunction f;
  f.kind_ = Kind::polynomial;
  f.num_ = std::move(coeffs);
  f.name_ = "poly:" + join_coeffs(f.num_);
  return f;
}

AnalyticFunction AnalyticFunction::exponential() {
  AnalyticFunction f;
  f.kind_ = Kind::exponential;
  f.name_ = "exp";
  return f;
}

AnalyticFunction AnalyticFunction::inverse() {
  AnalyticFunction f;
  f.kind_ = Kind::inverse;
  f.name_ = "inv";
  f.excluded_ = {Complex(0.0, 0.0)};
  return f;
}

AnalyticFunction AnalyticFunction::rational(std::vector<double> numerator,
                                            std::vector<double> denominator) {
  if (numerator.empty() || denominator.empty()) {
    throw ParseError("rational needs numerator and denominator coefficients");
  }
  if (effectively_zero(denominator)) {
    throw ParseError("rational denominator is identically zero");
  }
  AnalyticFunction f;
  f.kind_ = Kind::rational;
  f.num_ = std::move(numerator);
  f.den_ = std::move(denominator);
  f.name_ = "rational:" + join_coeffs(f.num_) + "/" + join_coeffs(f.den_);
  f.excluded_ = polynomial_roots(f.den_);
  return f;
}

AnalyticFunction AnalyticFunction::parse(const std::string& registry_name) {
  if (registry_name == "exp") return exponential();
  if (registry_name == "inv") return inverse();
  const std::string poly_prefix = "poly:";
  if (registry_name.rfind(poly_prefix, 0) == 0) {
    return polynomial(
        parse_coeff_list(registry_name.substr(poly_prefix.size()), registry_name));
  }
  const std::string rat_prefix = "rational:";
  if (registry_name.rfind(rat_prefix, 0) == 0) {
    const std::string body = registry_name.substr(rat_prefix.size());
    const std::size_t slash = body.find('/');
    if (slash == std::string::npos) {
      throw ParseError("rational function '" + registry_name +
                       "' needs the form rational:<num>/<den>");
    }
    return rational(parse_coeff_list(body.substr(0, slash), registry_name),
                    parse_coeff_list(body.substr(slash + 1), registry_name));
  }
  throw ParseError("unknown function '" + registry_name +
                   "' (expected poly:c0,c1,..., exp, inv, or "
                   "rational:<num>/<den>)");
}

Complex AnalyticFunction::evaluate(Complex z) const {
  Complex value;
  switch (kind_) {
    case Kind::polynomial:
      value = horner(num_, z);
      break;
    case Kind::exponential:
      value = std::exp(z);
      break;
    case Kind::inverse:
      value = 1.0 / z;
      break;
    case Kind::rational:
      value = horner(num_, z) / horner(den_, z);
      break;
  }
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    std::ostringstream os;
    os << name_ << " is singular at (" << z.real() << ", " << z.imag() << ")";
    throw HypothesisError("excluded-point", os.str());
  }
  return value;
}

std::optional<Complex> AnalyticFunction::value_at_zero() const {
  switch (kind_) {
    case Kind::polynomial:
      return Complex(num_.front(), 0.0);
    case Kind::exponential:
      return Complex(1.0, 0.0);
    case Kind::inverse:
      // Stored constant from the toolkit's inverse-function convention;
      // not an analytic value.
      return Complex(0.0, 0.0);
    case Kind::rational: {
      const Complex den0 = horner(den_, Complex(0.0, 0.0));
      if (std::abs(den0) == 0.0) return std::nullopt;
      return horner(num_, Complex(0.0, 0.0)) / den0;
    }
  }
  return std::nullopt;
}

bool AnalyticFunction::admissible(Complex z, double clearance) const {
  return distance_to_excluded(z) >= clearance;
}

double AnalyticFunction::distance_to_excluded(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Complex& p : excluded_) d = std::min(d, std::abs(z - p));
  return d;
}

}  // namespace kreinkit
