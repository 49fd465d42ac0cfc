#include "kreinkit/julia.hpp"

#include <array>
#include <sstream>
#include <utility>

#include "kreinkit/error.hpp"
#include "kreinkit/linalg.hpp"

namespace kreinkit {

namespace {

struct IdentityCheck {
  const char* name;
  ComplexMatrix lhs;
  ComplexMatrix rhs;
};

// Residuals of the six block identities of U# U = I and U U# = I.  The
// caller supplies the blocks; E# and D# are formed here.
std::array<IdentityCheck, 6> block_identities(const ComplexMatrix& c,
                                              const ComplexMatrix& d,
                                              const ComplexMatrix& e,
                                              const ComplexMatrix& lstar,
                                              const KreinSpace& space) {
  const std::size_t n = space.dim();
  const std::size_t r1 = d.cols();
  const std::size_t r2 = e.cols();
  const ComplexMatrix csharp = j_adjoint(c, space);
  const ComplexMatrix esharp = e.adjoint() * space.j();
  const ComplexMatrix dsharp = d.adjoint() * space.j();
  const ComplexMatrix l = lstar.adjoint();
  return {{
      {"C#C + EE# = I", csharp * c + e * esharp, ComplexMatrix::identity(n)},
      {"C#D = EL*", csharp * d, e * lstar},
      {"D#D + LL* = I", dsharp * d + l * lstar, ComplexMatrix::identity(r1)},
      {"CC# + DD# = I", c * csharp + d * dsharp, ComplexMatrix::identity(n)},
      {"CE = DL", c * e, d * l},
      {"E#E + L*L = I", esharp * e + lstar * l, ComplexMatrix::identity(r2)},
  }};
}

double identity_scale(const IdentityCheck& idc) {
  return 1.0 + idc.lhs.frobenius_norm() + idc.rhs.frobenius_norm();
}

}  // namespace

DefectPair defect_for(const ComplexMatrix& c, const KreinSpace& space,
                      DefectSide side, double tol_rel, double rank_rel) {
  if (!c.square() || c.rows() != space.dim()) {
    throw DimensionError("defect_for: operator must be square on the space");
  }
  const ComplexMatrix csharp = j_adjoint(c, space);
  const ComplexMatrix eye = ComplexMatrix::identity(space.dim());
  ComplexMatrix gram = side == DefectSide::right
                           ? (eye - csharp * c) * space.j()
                           : (eye - c * csharp) * space.j();
  gram = hermitian_part(gram);

  const PsdVerdict verdict = psd_verdict(gram, tol_rel);
  if (!verdict.positive_semidefinite()) {
    std::ostringstream os;
    if (side == DefectSide::right) {
      os << "right defect gram (I - C#C) J is " << to_string(verdict.verdict)
         << " (min eigenvalue " << verdict.min_eigenvalue
         << "): C is not a J-contraction";
      throw HypothesisError("j-contraction", os.str());
    }
    os << "left defect gram (I - CC#) J is " << to_string(verdict.verdict)
       << " (min eigenvalue " << verdict.min_eigenvalue
       << "): C# is not a J-contraction, so C is not a bicontraction";
    throw HypothesisError("j-bicontraction", os.str());
  }

  DefectPair out;
  out.gram = std::move(gram);
  // A gram in the zero band (J-unitary directions only) has an empty
  // defect; factoring its noise eigenvalues would fabricate rank.
  if (verdict.verdict == Definiteness::zero) {
    out.factor = ComplexMatrix(space.dim(), 0);
    out.rank = 0;
    return out;
  }
  PsdFactor factor = psd_factor(out.gram, rank_rel, tol_rel);
  out.factor = std::move(factor.factor);
  out.rank = factor.rank;
  return out;
}

JuliaOperator julia_operator(const ComplexMatrix& c, const KreinSpace& space,
                             double tol_rel) {
  DefectPair right = defect_for(c, space, DefectSide::right, tol_rel);
  DefectPair left = defect_for(c, space, DefectSide::left, tol_rel);

  JuliaOperator jop;
  jop.c = c;
  jop.e = std::move(right.factor);
  jop.d = std::move(left.factor);
  jop.r2 = right.rank;
  jop.r1 = left.rank;

  // E L* = C# D is solvable because range(C# D) lies in range(E) for any
  // bicontraction; the residual certifies that the pseudoinverse solution
  // actually hit the right-hand side.
  const ComplexMatrix csharp_d = j_adjoint(c, space) * jop.d;
  jop.lstar = pinv(jop.e) * csharp_d;
  const double link_residual = (jop.e * jop.lstar - csharp_d).frobenius_norm();
  if (link_residual > tol_rel * (1.0 + csharp_d.frobenius_norm())) {
    std::ostringstream os;
    os << "julia_operator: link system E L* = C#D left residual "
       << link_residual << "; defect factors are inconsistent";
    throw NumericalError(os.str());
  }

  for (const IdentityCheck& idc :
       block_identities(jop.c, jop.d, jop.e, jop.lstar, space)) {
    const double residual = (idc.lhs - idc.rhs).frobenius_norm();
    jop.residuals[idc.name] = residual;
    if (residual > tol_rel * identity_scale(idc)) {
      std::ostringstream os;
      os << "julia_operator: block identity '" << idc.name
         << "' has residual " << residual;
      throw NumericalError(os.str());
    }
  }
  jop.l_norm = spectral_norm(jop.lstar);
  return jop;
}

ComplexMatrix julia_assemble(const JuliaOperator& jop, const KreinSpace& space) {
  const ComplexMatrix esharp = jop.e.adjoint() * space.j();
  return assemble_2x2(jop.c, jop.d, esharp, -1.0 * jop.lstar);
}

KreinSpace julia_domain_space(const JuliaOperator& jop,
                              const KreinSpace& space) {
  const ComplexMatrix jtilde =
      direct_sum(space.j(), ComplexMatrix::identity(jop.r1));
  return KreinSpace(jtilde, space.negative_dim() == 0);
}

KreinSpace julia_codomain_space(const JuliaOperator& jop,
                                const KreinSpace& space) {
  const ComplexMatrix jtilde =
      direct_sum(space.j(), ComplexMatrix::identity(jop.r2));
  return KreinSpace(jtilde, space.negative_dim() == 0);
}

StepReport verify_julia(const ComplexMatrix& u, const KreinSpace& space,
                        double tol_rel) {
  const std::size_t n = space.dim();
  if (u.rows() < n || u.cols() < n) {
    throw DimensionError("verify_julia: matrix smaller than the base space");
  }
  const std::size_t r2 = u.rows() - n;
  const std::size_t r1 = u.cols() - n;
  const ComplexMatrix c = u.block(0, 0, n, n);
  const ComplexMatrix d = u.block(0, n, n, r1);
  const ComplexMatrix esharp = u.block(n, 0, r2, n);
  const ComplexMatrix lstar = -1.0 * u.block(n, n, r2, r1);
  // E# = E* J inverts to E = J (E#)*.
  const ComplexMatrix e = space.j() * esharp.adjoint();

  StepReport report;
  report.step_name = "julia-unitarity";
  report.passed = true;
  report.residual = 0.0;
  report.tolerance = tol_rel;
  double worst_ratio = -1.0;
  std::string first_failure;
  for (const IdentityCheck& idc : block_identities(c, d, e, lstar, space)) {
    const double residual = (idc.lhs - idc.rhs).frobenius_norm();
    const double tol = tol_rel * identity_scale(idc);
    if (residual / tol > worst_ratio) {
      worst_ratio = residual / tol;
      report.residual = residual;
      report.tolerance = tol;
    }
    if (residual > tol) {
      report.passed = false;
      if (first_failure.empty()) {
        std::ostringstream os;
        os << "identity '" << idc.name << "' fails: residual " << residual
           << " exceeds " << tol;
        first_failure = os.str();
      }
    }
  }
  if (report.passed) {
    std::ostringstream os;
    os << "all six block identities hold (worst residual " << report.residual
       << ")";
    report.details = os.str();
  } else {
    report.details = first_failure;
  }
  return report;
}

}  // namespace kreinkit
