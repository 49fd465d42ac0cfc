#pragma once

#include <cstddef>
#include <vector>

#include "kreinkit/analytic.hpp"
#include "kreinkit/defaults.hpp"
#include "kreinkit/krein.hpp"
#include "kreinkit/matrix.hpp"
#include "kreinkit/report.hpp"

namespace kreinkit {

/// One positively-oriented circle of a quadrature contour.
struct ContourCircle {
  Complex center;
  double radius = 0.0;
  std::size_t nodes = defaults::kQuadratureInitialNodes;
};

/// Union of circles enclosing a spectrum: symmetric with respect to the
/// real axis, each eigenvalue strictly inside exactly one circle, every
/// excluded point of the function strictly outside all of them.
struct Contour {
  std::vector<ContourCircle> circles;
  double clearance = 0.0;
};

/// Default clearance for a spectrum/function pair: kClearanceDiamFactor of
/// the spectral diameter, shrunk toward the nearest excluded point by
/// kClearanceExcludedFactor, floored at kClearanceFloor.
double default_clearance(const std::vector<Complex>& spectrum_points,
                         const AnalyticFunction& f);

/// Builds the contour by symmetrized greedy clustering: the point set is
/// closed under conjugation, points closer than 4x clearance merge into a
/// cluster, clusters whose circles overlap are merged again.  Throws
/// HypothesisError when an eigenvalue sits within 2x clearance of an
/// excluded point or an excluded point cannot be kept outside.
Contour build_contour(const std::vector<Complex>& spectrum_points,
                      const AnalyticFunction& f, double clearance_min);

/// Converged quadrature value with its achieved-residual metadata.
struct ContourResult {
  ComplexMatrix value;
  double residual = 0.0;          // last node-doubling difference
  std::size_t nodes_per_circle = 0;
  std::vector<double> residual_history;  // one entry per doubling
};

/// Trapezoidal quadrature of the resolvent integral over the contour,
/// doubling nodes until successive values differ by at most
/// quadrature_rel * (1 + ||value||_F); NumericalError past the per-circle
/// node budget.  Node sums use fixed-size blocks reduced in index order,
/// so results are identical for any thread count.
ContourResult calculus_contour(const AnalyticFunction& f,
                               const ComplexMatrix& a, const Contour& contour,
                               double quadrature_rel = 1e-10);

/// Convenience: spectrum, default clearance, contour, quadrature.
ContourResult calculus_contour(const AnalyticFunction& f,
                               const ComplexMatrix& a,
                               double quadrature_rel = 1e-10);

/// Independent route: S f(Lambda) S^-1 from the eigendecomposition.
/// Refuses eigenvector bases with condition beyond
/// defaults::kSpectralConditionCap (NumericalError, pointing the caller to
/// the contour route) and eigenvalues sitting on excluded points
/// (HypothesisError).
ComplexMatrix calculus_spectral(const AnalyticFunction& f,
                                const ComplexMatrix& a);

/// Closed-form driver used by verdict code where exactness matters:
/// Horner for polynomials, expm for exp, inverse for inv, and
/// p(A) q(A)^-1 for rationals.  Spectrum touching an excluded point is a
/// HypothesisError.
ComplexMatrix apply_function(const AnalyticFunction& f, const ComplexMatrix& a);

/// f(A) is J-selfadjoint whenever A is and f is real on the reals: runs
/// the contour route and reports the J-selfadjointness residual of f(A)
/// against residual_rel * (1 + ||f(A)||_F).
StepReport check_j_selfadjoint_calculus(const AnalyticFunction& f,
                                        const ComplexMatrix& a,
                                        const KreinSpace& space);

/// Covariance under J-unitary conjugation: f(U# A U) = U# f(A) U, with
/// matching spectra.  U must certify as J-unitary; residual bound
/// 1e-8 * (1 + ||f(A)||_F), spectra matched as sorted multisets to 1e-8.
StepReport check_unitary_covariance(const AnalyticFunction& f,
                                    const ComplexMatrix& a,
                                    const ComplexMatrix& u,
                                    const KreinSpace& space);

}  // namespace kreinkit
