#include "kreinkit/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

#include "kreinkit/error.hpp"
#include "kreinkit/linalg.hpp"

namespace kreinkit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<Complex> symmetrized(const std::vector<Complex>& pts) {
  std::vector<Complex> out = pts;
  for (const Complex& z : pts) {
    if (z.imag() != 0.0) out.push_back(std::conj(z));
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

struct Cluster {
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
  std::vector<Complex> members;

  explicit Cluster(Complex z)
      : re_lo(z.real()), re_hi(z.real()), im_lo(z.imag()), im_hi(z.imag()),
        members{z} {}

  Complex center() const {
    return Complex(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi));
  }
  double radius_to_members() const {
    double r = 0.0;
    const Complex c = center();
    for (const Complex& m : members) r = std::max(r, std::abs(m - c));
    return r;
  }
  void absorb(const Cluster& other) {
    re_lo = std::min(re_lo, other.re_lo);
    re_hi = std::max(re_hi, other.re_hi);
    im_lo = std::min(im_lo, other.im_lo);
    im_hi = std::max(im_hi, other.im_hi);
    members.insert(members.end(), other.members.begin(), other.members.end());
  }
};

// Snaps tiny imaginary bbox centers to the real axis so that clusters of
// conjugate pairs produce circles centered exactly on it.
Complex snapped_center(const Cluster& c, double clearance) {
  Complex z = c.center();
  if (std::abs(z.imag()) < 1e-12 * std::max(1.0, clearance)) {
    z = Complex(z.real(), 0.0);
  }
  return z;
}

ComplexMatrix circle_quadrature(const AnalyticFunction& f,
                                const ComplexMatrix& a, Complex center,
                                double radius, std::size_t nodes) {
  const std::size_t n = a.rows();
  const std::size_t block = defaults::kQuadratureBlockNodes;
  const std::size_t nblocks = (nodes + block - 1) / block;
  std::vector<ComplexMatrix> partial(nblocks, ComplexMatrix(n, n));
  const ComplexMatrix eye = ComplexMatrix::identity(n);

#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
    ComplexMatrix acc(n, n);
    const std::size_t lo = static_cast<std::size_t>(b) * block;
    const std::size_t hi = std::min(lo + block, nodes);
    for (std::size_t k = lo; k < hi; ++k) {
      const double theta = kTwoPi * static_cast<double>(k) /
                           static_cast<double>(nodes);
      const Complex unit(std::cos(theta), std::sin(theta));
      const Complex lambda = center + radius * unit;
      // d(lambda) = i r e^{i theta} d(theta); the 1/(2 pi i) of the
      // resolvent integral cancels the i and the 2 pi of the node weight.
      const Complex weight = radius * unit / static_cast<double>(nodes);
      const ComplexMatrix resolvent = inverse(lambda * eye - a);
      acc += (weight * f.evaluate(lambda)) * resolvent;
    }
    partial[b] = std::move(acc);
  }

  ComplexMatrix sum(n, n);
  for (const ComplexMatrix& p : partial) sum += p;
  return sum;
}

}  // namespace

double default_clearance(const std::vector<Complex>& spectrum_points,
                         const AnalyticFunction& f) {
  double diam = 0.0;
  for (std::size_t i = 0; i < spectrum_points.size(); ++i) {
    for (std::size_t j = i + 1; j < spectrum_points.size(); ++j) {
      diam = std::max(diam, std::abs(spectrum_points[i] - spectrum_points[j]));
    }
  }
  double clearance = defaults::kClearanceDiamFactor * diam;
  if (!f.excluded_points().empty()) {
    double dist = std::numeric_limits<double>::infinity();
    for (const Complex& z : spectrum_points) {
      dist = std::min(dist, f.distance_to_excluded(z));
    }
    clearance = std::min(clearance, defaults::kClearanceExcludedFactor * dist);
  }
  return std::max(defaults::kClearanceFloor, clearance);
}

Contour build_contour(const std::vector<Complex>& spectrum_points,
                      const AnalyticFunction& f, double clearance_min) {
  if (spectrum_points.empty()) {
    throw DimensionError("build_contour: empty spectrum");
  }
  if (!(clearance_min > 0.0)) {
    throw DimensionError("build_contour: clearance must be positive");
  }
  const std::vector<Complex> pts = symmetrized(spectrum_points);

  for (const Complex& z : pts) {
    const double dist = f.distance_to_excluded(z);
    if (dist < 2.0 * clearance_min) {
      Complex nearest = z;
      double best = std::numeric_limits<double>::infinity();
      for (const Complex& p : f.excluded_points()) {
        const double d = std::abs(z - p);
        if (d < best) {
          best = d;
          nearest = p;
        }
      }
      std::ostringstream os;
      os << "spectrum point (" << z.real() << ", " << z.imag()
         << ") lies within twice the clearance " << clearance_min
         << " of the excluded point (" << nearest.real() << ", "
         << nearest.imag() << ") of " << f.name() << " (distance " << dist
         << ")";
      throw HypothesisError("spectrum-clearance", os.str());
    }
  }

  // Greedy union of points closer than 4x clearance.
  std::vector<Cluster> clusters;
  for (const Complex& z : pts) {
    bool placed = false;
    for (Cluster& c : clusters) {
      for (const Complex& m : c.members) {
        if (std::abs(z - m) < 4.0 * clearance_min) {
          c.absorb(Cluster(z));
          placed = true;
          break;
        }
      }
      if (placed) break;
    }
    if (!placed) clusters.emplace_back(z);
  }

  // Merge clusters whose circles would overlap, until stable.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < clusters.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j) {
        const double ri = clusters[i].radius_to_members() + clearance_min;
        const double rj = clusters[j].radius_to_members() + clearance_min;
        const double dist = std::abs(snapped_center(clusters[i], clearance_min) -
                                     snapped_center(clusters[j], clearance_min));
        if (dist <= ri + rj + 0.5 * clearance_min) {
          clusters[i].absorb(clusters[j]);
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
    }
  }

  Contour contour;
  contour.clearance = clearance_min;
  for (const Cluster& c : clusters) {
    ContourCircle circle;
    circle.center = snapped_center(c, clearance_min);
    circle.radius = c.radius_to_members() + clearance_min;
    circle.nodes = defaults::kQuadratureInitialNodes;
    contour.circles.push_back(circle);
  }

  // Certify the construction: one circle per eigenvalue, poles outside.
  for (const Complex& z : pts) {
    std::size_t inside = 0;
    for (const ContourCircle& c : contour.circles) {
      if (std::abs(z - c.center) < c.radius) ++inside;
    }
    if (inside != 1) {
      throw NumericalError("build_contour: eigenvalue not enclosed by "
                           "exactly one circle (internal bug)");
    }
  }
  for (const Complex& p : f.excluded_points()) {
    for (const ContourCircle& c : contour.circles) {
      if (std::abs(p - c.center) < c.radius + clearance_min) {
        std::ostringstream os;
        os << "excluded point (" << p.real() << ", " << p.imag() << ") of "
           << f.name() << " cannot be kept outside the contour";
        throw HypothesisError("spectrum-clearance", os.str());
      }
    }
  }
  return contour;
}

ContourResult calculus_contour(const AnalyticFunction& f,
                               const ComplexMatrix& a, const Contour& contour,
                               double quadrature_rel) {
  if (!a.square()) throw DimensionError("calculus_contour: matrix must be square");
  if (contour.circles.empty()) {
    throw DimensionError("calculus_contour: contour has no circles");
  }
  std::size_t nodes = defaults::kQuadratureInitialNodes;
  for (const ContourCircle& c : contour.circles) nodes = std::max(nodes, c.nodes);

  ContourResult out;
  const std::size_t n = a.rows();
  ComplexMatrix prev(n, n);
  bool have_prev = false;
  for (; nodes <= defaults::kQuadratureNodeBudget; nodes *= 2) {
    ComplexMatrix value(n, n);
    for (const ContourCircle& c : contour.circles) {
      value += circle_quadrature(f, a, c.center, c.radius, nodes);
    }
    if (!value.all_finite()) {
      throw NumericalError("calculus_contour: non-finite quadrature value");
    }
    if (have_prev) {
      const double diff = (value - prev).frobenius_norm();
      out.residual_history.push_back(diff);
      if (diff <= quadrature_rel * (1.0 + value.frobenius_norm())) {
        out.value = value;
        out.residual = diff;
        out.nodes_per_circle = nodes;
        return out;
      }
    }
    prev = value;
    have_prev = true;
  }
  std::ostringstream os;
  os << "calculus_contour: quadrature did not converge within "
     << defaults::kQuadratureNodeBudget << " nodes per circle (last residual "
     << (out.residual_history.empty() ? -1.0 : out.residual_history.back())
     << ")";
  throw NumericalError(os.str());
}

ContourResult calculus_contour(const AnalyticFunction& f,
                               const ComplexMatrix& a, double quadrature_rel) {
  const std::vector<Complex> spec = spectrum(a);
  const Contour contour = build_contour(spec, f, default_clearance(spec, f));
  return calculus_contour(f, a, contour, quadrature_rel);
}

ComplexMatrix calculus_spectral(const AnalyticFunction& f,
                                const ComplexMatrix& a) {
  const Eigendecomposition ed = eigendecomposition(a);
  if (ed.condition > defaults::kSpectralConditionCap) {
    std::ostringstream os;
    os << "calculus_spectral: eigenvector basis condition " << ed.condition
       << " exceeds " << defaults::kSpectralConditionCap
       << "; use the contour route";
    throw NumericalError(os.str());
  }
  const std::size_t n = a.rows();
  ComplexMatrix sd = ed.eigenvectors;  // becomes S f(Lambda)
  for (std::size_t j = 0; j < n; ++j) {
    const Complex lambda = ed.eigenvalues[j];
    if (f.distance_to_excluded(lambda) <= 1e-12 * (1.0 + std::abs(lambda))) {
      std::ostringstream os;
      os << "calculus_spectral: eigenvalue (" << lambda.real() << ", "
         << lambda.imag() << ") sits on an excluded point of " << f.name();
      throw HypothesisError("excluded-point", os.str());
    }
    const Complex flambda = f.evaluate(lambda);
    for (std::size_t i = 0; i < n; ++i) sd(i, j) *= flambda;
  }
  if (ed.hermitian_path) return sd * ed.eigenvectors.adjoint();
  return sd * inverse(ed.eigenvectors);
}

ComplexMatrix apply_function(const AnalyticFunction& f, const ComplexMatrix& a) {
  if (!a.square()) throw DimensionError("apply_function: matrix must be square");
  switch (f.kind()) {
    case AnalyticFunction::Kind::polynomial:
      return horner(f.numerator(), a);
    case AnalyticFunction::Kind::exponential:
      return expm(a);
    case AnalyticFunction::Kind::inverse:
      if (!is_invertible(a)) {
        throw HypothesisError("excluded-point",
                              "spectrum touches the excluded point (0, 0) of "
                              "inv: operand is singular");
      }
      return inverse(a);
    case AnalyticFunction::Kind::rational: {
      const ComplexMatrix den = horner(f.denominator(), a);
      if (!is_invertible(den)) {
        throw HypothesisError("excluded-point",
                              "spectrum touches a pole of " + f.name() +
                                  ": denominator is singular");
      }
      return horner(f.numerator(), a) * inverse(den);
    }
  }
  throw NumericalError("apply_function: unreachable function kind");
}

StepReport check_j_selfadjoint_calculus(const AnalyticFunction& f,
                                        const ComplexMatrix& a,
                                        const KreinSpace& space) {
  if (!is_j_selfadjoint(a, space)) {
    throw HypothesisError("j-selfadjoint-input",
                          "check_j_selfadjoint_calculus: operand is not "
                          "J-selfadjoint");
  }
  const ContourResult r = calculus_contour(f, a);
  StepReport report;
  report.step_name = "j-selfadjoint-calculus";
  report.residual = j_selfadjoint_residual(r.value, space);
  report.tolerance = 1e-9 * (1.0 + r.value.frobenius_norm());
  report.passed = report.residual <= report.tolerance;
  std::ostringstream os;
  os << f.name() << " via contour (" << r.nodes_per_circle
     << " nodes per circle, quadrature residual " << r.residual << ")";
  report.details = os.str();
  return report;
}

StepReport check_unitary_covariance(const AnalyticFunction& f,
                                    const ComplexMatrix& a,
                                    const ComplexMatrix& u,
                                    const KreinSpace& space) {
  if (max_abs_diff(u.adjoint() * space.j() * u, space.j()) > 1e-9) {
    throw HypothesisError("j-unitary-factor",
                          "check_unitary_covariance: U fails U* J U = J");
  }
  if (!is_j_selfadjoint(a, space)) {
    throw HypothesisError("j-selfadjoint-input",
                          "check_unitary_covariance: operand is not "
                          "J-selfadjoint");
  }
  const ComplexMatrix b = j_adjoint(u, space) * a * u;

  const std::vector<Complex> spec_a = spectrum(a);
  const std::vector<Complex> spec_b = spectrum(b);
  double spec_diff = 0.0;
  for (std::size_t i = 0; i < spec_a.size(); ++i) {
    spec_diff = std::max(spec_diff, std::abs(spec_a[i] - spec_b[i]));
  }

  const ContourResult fa = calculus_contour(f, a);
  const ContourResult fb = calculus_contour(f, b);
  const ComplexMatrix covariant = j_adjoint(u, space) * fa.value * u;

  StepReport report;
  report.step_name = "unitary-covariance";
  report.residual = (fb.value - covariant).frobenius_norm();
  report.tolerance = 1e-8 * (1.0 + fa.value.frobenius_norm());
  report.passed = report.residual <= report.tolerance && spec_diff <= 1e-8;
  std::ostringstream os;
  os << f.name() << "; spectra agree to " << spec_diff
     << " as sorted multisets";
  report.details = os.str();
  return report;
}

}  // namespace kreinkit
