#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "kreinkit/krein.hpp"
#include "kreinkit/matrix.hpp"
#include "kreinkit/report.hpp"

namespace kreinkit {

enum class DefectSide { right, left };

/// Defect data of a J-contraction C.  The right gram is (I - C#C) J with
/// factor E, the left gram is (I - CC#) J with factor D; in both cases
/// factor factor* = gram and rank = rank(gram).  An indefinite right gram
/// means C is not a J-contraction, an indefinite left gram means C# is not
/// (so C is not a bicontraction); both are hypothesis failures.
struct DefectPair {
  ComplexMatrix factor;
  ComplexMatrix gram;
  std::size_t rank = 0;
};

DefectPair defect_for(const ComplexMatrix& c, const KreinSpace& space,
                      DefectSide side, double tol_rel = 1e-9,
                      double rank_rel = 1e-10);

/// Blocks of the Julia operator U = [[C, D], [E#, -L*]] of a bicontraction,
/// mapping H (+) C^{r1} -> H (+) C^{r2}.  L* solves E L* = C# D through the
/// pseudoinverse of E; the solved system and the six block identities that
/// make U unitary between the augmented symmetries J (+) I_{r1} and
/// J (+) I_{r2} are certified at construction, and their residuals kept
/// for reporting.  l_norm records ||L||, which routinely exceeds 1: the
/// link operator is NOT a contraction in general.
struct JuliaOperator {
  ComplexMatrix c;      // n x n
  ComplexMatrix d;      // n x r1, left defect factor
  ComplexMatrix e;      // n x r2, right defect factor
  ComplexMatrix lstar;  // r2 x r1, link block (stored without the sign)
  std::size_t r1 = 0;
  std::size_t r2 = 0;
  std::map<std::string, double> residuals;
  double l_norm = 0.0;
};

JuliaOperator julia_operator(const ComplexMatrix& c, const KreinSpace& space,
                             double tol_rel = 1e-9);

/// The assembled matrix [[C, D], [E#, -L*]] of shape (n+r2) x (n+r1).
ComplexMatrix julia_assemble(const JuliaOperator& jop, const KreinSpace& space);

/// Augmented symmetries J (+) I_{r1} (domain) and J (+) I_{r2} (codomain).
KreinSpace julia_domain_space(const JuliaOperator& jop, const KreinSpace& space);
KreinSpace julia_codomain_space(const JuliaOperator& jop,
                                const KreinSpace& space);

/// Re-derives the blocks of a claimed Julia matrix from its shape and
/// checks the six unitarity identities, reporting the first failure by
/// name.  The residual reported is the worst over all six.
StepReport verify_julia(const ComplexMatrix& u, const KreinSpace& space,
                        double tol_rel = 1e-9);

}  // namespace kreinkit
