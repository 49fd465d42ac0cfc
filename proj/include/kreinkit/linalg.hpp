#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kreinkit/defaults.hpp"
#include "kreinkit/matrix.hpp"

namespace kreinkit {

/// Eigendecomposition of a Hermitian matrix: M = V diag(lambda) V* with V
/// unitary and lambda real ascending.  Produced by cyclic Jacobi sweeps;
/// fully deterministic (fixed sweep order, eigenvector phases canonicalized
/// so the largest-modulus component of each column is real positive).
struct HermitianEigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, unitary
};

HermitianEigenSystem hermitian_eig(const ComplexMatrix& m);

enum class Definiteness { positive, negative, zero, indefinite };

/// Classification of a Hermitian matrix against the PSD cone with an
/// explicit tolerance band.  positive: min eig >= -tol; negative: max eig
/// <= tol; zero: both; indefinite: neither.  tolerance_used is
/// tol_rel * max(1, spectral norm).
struct PsdVerdict {
  Definiteness verdict = Definiteness::indefinite;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double tolerance_used = 0.0;

  bool positive_semidefinite() const noexcept {
    return verdict == Definiteness::positive || verdict == Definiteness::zero;
  }
  bool negative_semidefinite() const noexcept {
    return verdict == Definiteness::negative || verdict == Definiteness::zero;
  }
};

const char* to_string(Definiteness d) noexcept;

/// Verdict for a matrix that must be Hermitian up to herm_tol_abs
/// (default: residual_rel * max(1, ||M||_F)).  Throws HypothesisError when
/// the Hermitian residual exceeds the bound; the verdict is computed on the
/// Hermitian part.
PsdVerdict psd_verdict(const ComplexMatrix& m, double tol_rel = 1e-9,
                       double herm_tol_abs = -1.0);

/// Factor F of a PSD matrix M with M = F F*, F of full column rank
/// r = #{eigenvalues > rank_rel * lambda_max}.  Columns are ordered by
/// descending eigenvalue.  Throws HypothesisError when M fails the PSD
/// verdict at tol_rel.
struct PsdFactor {
  ComplexMatrix factor;  // n x r
  std::size_t rank = 0;
};

PsdFactor psd_factor(const ComplexMatrix& m, double rank_rel = 1e-10,
                     double tol_rel = 1e-9);

/// Complex Schur decomposition A = Q T Q* with Q unitary and T upper
/// triangular, by Householder Hessenberg reduction and shifted QR.
/// Dimension capped at defaults::kMaxSpectrumDim.
struct SchurDecomposition {
  ComplexMatrix q;
  ComplexMatrix t;
};

SchurDecomposition schur(const ComplexMatrix& a);

/// Full multiset of eigenvalues sorted by (real, imag).  Every returned
/// lambda is certified against sigma_min(A - lambda I) <= 1e-8 * ||A||_F;
/// failure raises NumericalError (inconclusive).
std::vector<Complex> spectrum(const ComplexMatrix& a);

/// Eigendecomposition A = S diag(lambda) S^-1 for diagonalizable A.
/// Hermitian inputs take the Jacobi path (S unitary, condition 1); general
/// inputs take the Schur path with triangular back-substitution.  condition
/// is sigma_max(S)/sigma_min(S).
struct Eigendecomposition {
  std::vector<Complex> eigenvalues;
  ComplexMatrix eigenvectors;  // S
  double condition = 1.0;
  bool hermitian_path = false;
};

Eigendecomposition eigendecomposition(const ComplexMatrix& a);

/// Thin singular value decomposition A = U diag(sigma) V* with sigma
/// descending, by one-sided Jacobi (high relative accuracy for the small
/// singular values the invertibility checks depend on).
struct Svd {
  ComplexMatrix u;            // m x k, k = min(m, n)
  std::vector<double> sigma;  // descending, length k
  ComplexMatrix v;            // n x k
};

Svd svd(const ComplexMatrix& a);

/// Largest singular value.
double spectral_norm(const ComplexMatrix& a);

/// {sigma_max, sigma_min} of a (possibly rectangular) matrix.
struct SingularExtent {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

SingularExtent singular_extent(const ComplexMatrix& a);

/// sigma_min >= tol * sigma_max (the toolkit-wide operational meaning of
/// "invertible").  Empty and non-square matrices are not invertible.
bool is_invertible(const ComplexMatrix& a, double tol = 1e-8);

/// Solve A X = B by LU with partial pivoting.  Throws NumericalError on a
/// numerically singular pivot (message carries the condition estimate).
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix inverse(const ComplexMatrix& a);

/// Moore-Penrose pseudoinverse with singular values <= rank_rel * sigma_max
/// treated as zero.
ComplexMatrix pinv(const ComplexMatrix& a, double rank_rel = 1e-10);

/// Matrix exponential by scaling and squaring: A is halved until
/// ||A||_F / 2^s <= 0.5, the Taylor series is summed to machine tail, and
/// the result squared s times.
ComplexMatrix expm(const ComplexMatrix& a);

}  // namespace kreinkit
