#pragma once

#include <cstddef>
#include <vector>

#include "kreinkit/defaults.hpp"
#include "kreinkit/linalg.hpp"
#include "kreinkit/matrix.hpp"

namespace kreinkit {

/// Finite-dimensional Krein space: a complex inner-product space carrying a
/// fundamental symmetry J with J = J* = J^-1.  The indefinite inner product
/// is [x, y] = <J x, y>.  Construction certifies J to 1e-12 and computes the
/// signature (p, q) = (dim of the +1 eigenspace, dim of the -1 eigenspace);
/// q >= 1 unless the space is explicitly built in Hilbert mode (J = I), which
/// the defect spaces of Julia operators use.
class KreinSpace {
 public:
  /// General space from its fundamental symmetry.  Throws HypothesisError
  /// when J fails the symmetry certificates or is a positive-definite J
  /// without hilbert_mode.
  explicit KreinSpace(ComplexMatrix j, bool hilbert_mode = false);

  /// Minkowski space: J = diag(I_{n-1}, -1).
  static KreinSpace minkowski(std::size_t n);

  /// Hilbert space as a degenerate Krein space (J = I); q = 0 allowed.
  static KreinSpace hilbert(std::size_t n);

  std::size_t dim() const noexcept { return j_.rows(); }
  const ComplexMatrix& j() const noexcept { return j_; }
  std::size_t positive_dim() const noexcept { return p_; }
  std::size_t negative_dim() const noexcept { return q_; }

  /// Orthonormal J-eigenbasis, +1 block first: basis* J basis = diag(I_p, -I_q).
  const ComplexMatrix& eigenbasis() const noexcept { return basis_; }

  /// [x, y] = <J x, y> for column vectors (conjugate-linear in y).
  Complex indefinite_inner(const ComplexMatrix& x, const ComplexMatrix& y) const;

 private:
  ComplexMatrix j_;
  ComplexMatrix basis_;
  std::size_t p_ = 0, q_ = 0;
};

/// J-adjoint A# = J1 A* J2 of A : (H1, J1) -> (H2, J2).  For an operator on
/// a single space pass the same space twice (or use the single-space
/// overload).
ComplexMatrix j_adjoint(const ComplexMatrix& a, const KreinSpace& domain,
                        const KreinSpace& codomain);
ComplexMatrix j_adjoint(const ComplexMatrix& a, const KreinSpace& space);

/// ||J A - (J A)*||_F; zero exactly when A is J-selfadjoint.
double j_selfadjoint_residual(const ComplexMatrix& a, const KreinSpace& space);

bool is_j_selfadjoint(const ComplexMatrix& a, const KreinSpace& space,
                      double tol_rel = 1e-9);

/// J-positivity: [Ax, x] >= 0 for all x, certified as psd_verdict(J A).
PsdVerdict j_positive_verdict(const ComplexMatrix& a, const KreinSpace& space,
                              double tol_rel = 1e-9);

bool is_j_positive(const ComplexMatrix& a, const KreinSpace& space,
                   double tol_rel = 1e-9);

enum class OrderRelation { leq, geq, equal, incomparable };

const char* to_string(OrderRelation r) noexcept;

/// Verdict for the J-order A <=_J B, decided by the PSD verdict of the
/// Hermitian gap J (B - A).
struct OrderVerdict {
  OrderRelation relation = OrderRelation::incomparable;
  ComplexMatrix gap;  // J (B - A), Hermitian
  PsdVerdict psd;
};

/// Builds an OrderVerdict from an (approximately) Hermitian gap matrix.
/// herm_tol_abs bounds the allowed Hermitian residual; the verdict is
/// computed on the Hermitian part.
OrderVerdict order_from_gap(const ComplexMatrix& gap_j, double tol_rel = 1e-9,
                            double herm_tol_abs = -1.0);

/// J-order verdict for J-selfadjoint A, B.  Inputs failing the
/// J-selfadjointness residual are rejected, never symmetrized silently.
OrderVerdict j_order_verdict(const ComplexMatrix& a, const ComplexMatrix& b,
                             const KreinSpace& space, double tol_rel = 1e-9);

/// PSD verdict of the contraction gap J - C* J C.
PsdVerdict j_contraction_verdict(const ComplexMatrix& c, const KreinSpace& space,
                                 double tol_rel = 1e-9);

/// Bicontraction diagnostics: the defining verdicts for C and C#, plus the
/// invertibility route through the (1,1) block of C in the J-eigenbasis.
/// The two routes are cross-validated; `consistent` records agreement.
struct BicontractionReport {
  PsdVerdict contraction;        // J - C* J C
  PsdVerdict sharp_contraction;  // J - (C#)* J C#
  double c11_sigma_min = 0.0;
  double c11_sigma_max = 0.0;
  bool c11_invertible = false;
  bool bicontraction = false;
  bool consistent = true;
};

BicontractionReport j_bicontraction_report(const ComplexMatrix& c,
                                           const KreinSpace& space,
                                           double tol_rel = 1e-9);

/// Blocks of C with respect to the J-eigenbasis decomposition
/// H = H+ (+) H-: c11 acts on H+, c22 on H-.
struct BlockDecomposition {
  ComplexMatrix c11, c12, c21, c22;
};

BlockDecomposition block_decompose(const ComplexMatrix& c, const KreinSpace& space);

/// Reassembles a block decomposition back into the original basis.
ComplexMatrix block_reassemble(const BlockDecomposition& b, const KreinSpace& space);

/// For invertible J-positive A returns the positive-definite
/// Atilde = J A with A = J Atilde (the J-positive/PSD transfer).
/// Throws HypothesisError when A is singular or not J-positive.
ComplexMatrix jpositive_decompose(const ComplexMatrix& a, const KreinSpace& space,
                                  double tol_rel = 1e-9,
                                  double invertibility_tol = 1e-8);

}  // namespace kreinkit
