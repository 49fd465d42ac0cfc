#include "kreinkit/krein.hpp"

#include <cmath>
#include <sstream>

#include "kreinkit/error.hpp"

namespace kreinkit {

namespace {

void require_operator_on(const ComplexMatrix& a, const KreinSpace& space,
                         const char* op) {
  if (!a.square() || a.rows() != space.dim()) {
    throw DimensionError(std::string(op) + ": operator is " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " on a space of dimension " +
                         std::to_string(space.dim()));
  }
}

}  // namespace

KreinSpace::KreinSpace(ComplexMatrix j, bool hilbert_mode) : j_(std::move(j)) {
  if (!j_.square()) {
    throw DimensionError("KreinSpace: fundamental symmetry must be square");
  }
  const std::size_t n = j_.rows();
  const double herm = hermitian_residual(j_);
  if (herm > defaults::kSymmetryTol * std::max(1.0, j_.frobenius_norm())) {
    std::ostringstream os;
    os << "KreinSpace: J is not Hermitian (residual " << herm << ")";
    throw HypothesisError("fundamental-symmetry", os.str());
  }
  const double invol =
      (j_ * j_ - ComplexMatrix::identity(n)).frobenius_norm();
  if (invol > defaults::kSymmetryTol * static_cast<double>(std::max<std::size_t>(n, 1))) {
    std::ostringstream os;
    os << "KreinSpace: J is not an involution (||J^2 - I|| = " << invol << ")";
    throw HypothesisError("fundamental-symmetry", os.str());
  }

  const auto eig = hermitian_eig(hermitian_part(j_));
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(std::abs(eig.eigenvalues[i]) - 1.0) > 1e-10) {
      throw HypothesisError("fundamental-symmetry",
                            "KreinSpace: J has an eigenvalue off +-1");
    }
  }
  basis_ = ComplexMatrix(n, n);
  std::size_t col = 0;
  // +1 eigenvectors first, then -1, each block in the stable ascending
  // order hermitian_eig produced.
  for (std::size_t i = 0; i < n; ++i) {
    if (eig.eigenvalues[i] > 0.0) {
      for (std::size_t r = 0; r < n; ++r) basis_(r, col) = eig.eigenvectors(r, i);
      ++col;
      ++p_;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (eig.eigenvalues[i] < 0.0) {
      for (std::size_t r = 0; r < n; ++r) basis_(r, col) = eig.eigenvectors(r, i);
      ++col;
      ++q_;
    }
  }
  if (q_ == 0 && !hilbert_mode) {
    throw HypothesisError(
        "indefinite-signature",
        "KreinSpace: J is positive definite; pass hilbert_mode to allow q = 0");
  }
}

KreinSpace KreinSpace::minkowski(std::size_t n) {
  if (n < 2) throw DimensionError("minkowski: dimension must be >= 2");
  ComplexMatrix j = ComplexMatrix::identity(n);
  j(n - 1, n - 1) = -1.0;
  return KreinSpace(std::move(j));
}

KreinSpace KreinSpace::hilbert(std::size_t n) {
  return KreinSpace(ComplexMatrix::identity(n), /*hilbert_mode=*/true);
}

Complex KreinSpace::indefinite_inner(const ComplexMatrix& x,
                                     const ComplexMatrix& y) const {
  if (x.rows() != dim() || y.rows() != dim() || x.cols() != 1 || y.cols() != 1) {
    throw DimensionError("indefinite_inner: expected column vectors of the space dimension");
  }
  const ComplexMatrix jx = j_ * x;
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < dim(); ++i) s += jx(i, 0) * std::conj(y(i, 0));
  return s;
}

ComplexMatrix j_adjoint(const ComplexMatrix& a, const KreinSpace& domain,
                        const KreinSpace& codomain) {
  if (a.rows() != codomain.dim() || a.cols() != domain.dim()) {
    throw DimensionError("j_adjoint: operator shape does not match the spaces");
  }
  return domain.j() * a.adjoint() * codomain.j();
}

ComplexMatrix j_adjoint(const ComplexMatrix& a, const KreinSpace& space) {
  return j_adjoint(a, space, space);
}

double j_selfadjoint_residual(const ComplexMatrix& a, const KreinSpace& space) {
  require_operator_on(a, space, "j_selfadjoint_residual");
  return hermitian_residual(space.j() * a);
}

bool is_j_selfadjoint(const ComplexMatrix& a, const KreinSpace& space,
                      double tol_rel) {
  return j_selfadjoint_residual(a, space) <=
         tol_rel * std::max(1.0, a.frobenius_norm());
}

PsdVerdict j_positive_verdict(const ComplexMatrix& a, const KreinSpace& space,
                              double tol_rel) {
  require_operator_on(a, space, "j_positive_verdict");
  const double herm_tol = tol_rel * std::max(1.0, a.frobenius_norm());
  return psd_verdict(space.j() * a, tol_rel, herm_tol);
}

bool is_j_positive(const ComplexMatrix& a, const KreinSpace& space,
                   double tol_rel) {
  return j_positive_verdict(a, space, tol_rel).positive_semidefinite();
}

const char* to_string(OrderRelation r) noexcept {
  switch (r) {
    case OrderRelation::leq: return "leq";
    case OrderRelation::geq: return "geq";
    case OrderRelation::equal: return "equal";
    case OrderRelation::incomparable: return "incomparable";
  }
  return "incomparable";
}

OrderVerdict order_from_gap(const ComplexMatrix& gap_j, double tol_rel,
                            double herm_tol_abs) {
  OrderVerdict out;
  out.psd = psd_verdict(gap_j, tol_rel, herm_tol_abs);
  out.gap = hermitian_part(gap_j);
  switch (out.psd.verdict) {
    case Definiteness::positive: out.relation = OrderRelation::leq; break;
    case Definiteness::negative: out.relation = OrderRelation::geq; break;
    case Definiteness::zero: out.relation = OrderRelation::equal; break;
    case Definiteness::indefinite: out.relation = OrderRelation::incomparable; break;
  }
  return out;
}

OrderVerdict j_order_verdict(const ComplexMatrix& a, const ComplexMatrix& b,
                             const KreinSpace& space, double tol_rel) {
  require_operator_on(a, space, "j_order_verdict");
  require_operator_on(b, space, "j_order_verdict");
  // No silent symmetrization: both operands must be J-selfadjoint.
  for (const auto* m : {&a, &b}) {
    const double res = j_selfadjoint_residual(*m, space);
    const double bound = tol_rel * std::max(1.0, m->frobenius_norm());
    if (res > bound) {
      std::ostringstream os;
      os << "j_order_verdict: operand is not J-selfadjoint (residual " << res
         << " exceeds " << bound << ")";
      throw HypothesisError("j-selfadjoint-input", os.str());
    }
  }
  const ComplexMatrix gap = space.j() * (b - a);
  const double herm_tol =
      2.0 * tol_rel * std::max(1.0, a.frobenius_norm() + b.frobenius_norm());
  return order_from_gap(gap, tol_rel, herm_tol);
}

PsdVerdict j_contraction_verdict(const ComplexMatrix& c, const KreinSpace& space,
                                 double tol_rel) {
  require_operator_on(c, space, "j_contraction_verdict");
  const ComplexMatrix gap = space.j() - c.adjoint() * space.j() * c;
  const double herm_tol =
      tol_rel * std::max(1.0, 1.0 + c.frobenius_norm() * c.frobenius_norm());
  return psd_verdict(gap, tol_rel, herm_tol);
}

BicontractionReport j_bicontraction_report(const ComplexMatrix& c,
                                           const KreinSpace& space,
                                           double tol_rel) {
  require_operator_on(c, space, "j_bicontraction_report");
  BicontractionReport out;
  out.contraction = j_contraction_verdict(c, space, tol_rel);
  out.sharp_contraction =
      j_contraction_verdict(j_adjoint(c, space), space, tol_rel);
  const auto blocks = block_decompose(c, space);
  const auto ext = singular_extent(blocks.c11);
  out.c11_sigma_min = ext.sigma_min;
  out.c11_sigma_max = ext.sigma_max;
  out.c11_invertible = blocks.c11.rows() == blocks.c11.cols() &&
                       ext.sigma_max > 0.0 &&
                       ext.sigma_min >= 1e-8 * ext.sigma_max;
  out.bicontraction = out.contraction.positive_semidefinite() &&
                      out.sharp_contraction.positive_semidefinite();
  // Criterion route: a J-contraction with invertible (1,1) block is a
  // bicontraction.  Disagreement marks the report inconsistent instead of
  // silently preferring one route.
  if (out.contraction.positive_semidefinite() && out.c11_invertible &&
      !out.sharp_contraction.positive_semidefinite()) {
    out.consistent = false;
  }
  return out;
}

BlockDecomposition block_decompose(const ComplexMatrix& c, const KreinSpace& space) {
  require_operator_on(c, space, "block_decompose");
  const ComplexMatrix& b = space.eigenbasis();
  const ComplexMatrix t = b.adjoint() * c * b;
  const std::size_t p = space.positive_dim(), q = space.negative_dim();
  BlockDecomposition out;
  out.c11 = t.block(0, 0, p, p);
  out.c12 = t.block(0, p, p, q);
  out.c21 = t.block(p, 0, q, p);
  out.c22 = t.block(p, p, q, q);
  return out;
}

ComplexMatrix block_reassemble(const BlockDecomposition& blocks,
                               const KreinSpace& space) {
  const std::size_t p = space.positive_dim(), q = space.negative_dim();
  if (blocks.c11.rows() != p || blocks.c22.rows() != q) {
    throw DimensionError("block_reassemble: blocks do not match the signature");
  }
  ComplexMatrix t(space.dim(), space.dim());
  t.set_block(0, 0, blocks.c11);
  t.set_block(0, p, blocks.c12);
  t.set_block(p, 0, blocks.c21);
  t.set_block(p, p, blocks.c22);
  const ComplexMatrix& b = space.eigenbasis();
  return b * t * b.adjoint();
}

ComplexMatrix jpositive_decompose(const ComplexMatrix& a, const KreinSpace& space,
                                  double tol_rel, double invertibility_tol) {
  require_operator_on(a, space, "jpositive_decompose");
  const auto verdict = j_positive_verdict(a, space, tol_rel);
  if (!verdict.positive_semidefinite()) {
    std::ostringstream os;
    os << "jpositive_decompose: operand is not J-positive (J A verdict "
       << to_string(verdict.verdict) << ", min eigenvalue "
       << verdict.min_eigenvalue << ")";
    throw HypothesisError("j-positive-input", os.str());
  }
  if (!is_invertible(a, invertibility_tol)) {
    throw HypothesisError("invertible-input",
                          "jpositive_decompose: operand is singular at the "
                          "1e-8 relative singular value threshold");
  }
  return space.j() * a;
}

}  // namespace kreinkit
