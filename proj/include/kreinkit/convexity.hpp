#pragma once

#include <cstddef>
#include <vector>

#include "kreinkit/analytic.hpp"
#include "kreinkit/julia.hpp"
#include "kreinkit/krein.hpp"
#include "kreinkit/matrix.hpp"
#include "kreinkit/report.hpp"
#include "kreinkit/rng.hpp"

namespace kreinkit {

/// Convexity test data for J-positive A, B and a mixing weight:
/// gap = J [ (1-lambda) f(A) + lambda f(B) - f((1-lambda) A + lambda B) ],
/// Hermitian; relation leq in `order` means the function value at the
/// mixture sits below the mixture of values in the J-order, which is the
/// convexity inequality at that weight.
struct ConvexityVerdict {
  ComplexMatrix mixture;
  ComplexMatrix gap;
  OrderVerdict order;
};

ConvexityVerdict convexity_verdict(const AnalyticFunction& f,
                                   const ComplexMatrix& a,
                                   const ComplexMatrix& b, double lambda,
                                   const KreinSpace& space,
                                   double tol_rel = 1e-9);

/// Transformation-inequality data for J-positive A and a J-contraction C:
/// gap = J [ C# f(A) C - f(C# A C) ], Hermitian; relation leq means
/// f(C# A C) <=_J C# f(A) C.  Hypotheses: f analytic at 0 with f(0) = 0,
/// and every involved spectrum clear of the excluded points of f.
struct JensenVerdict {
  ComplexMatrix transformed;  // C# A C
  ComplexMatrix gap;
  OrderVerdict order;
};

JensenVerdict jensen_verdict(const AnalyticFunction& f, const ComplexMatrix& a,
                             const ComplexMatrix& c, const KreinSpace& space,
                             double tol_rel = 1e-9);

/// The same gap with no hypothesis checking at all: a diagnostic for
/// probing what happens outside the admissible region.  The closed-form
/// driver still refuses spectra that sit exactly on an excluded point.
ComplexMatrix jensen_raw_gap(const AnalyticFunction& f, const ComplexMatrix& a,
                             const ComplexMatrix& c, const KreinSpace& space);

/// The square-function transformation inequality holds unconditionally:
/// J (C# A^2 C - (C#AC)^2) equals (JA C)* (J - C J C*) (JA C), a
/// congruence of the sharp-contraction gap, hence PSD for any J-positive
/// A and J-contraction C.  Both forms and their agreement are reported.
struct SquareTransformationCheck {
  ComplexMatrix gap;             // J (C# A^2 C - (C#AC)^2), Hermitian
  ComplexMatrix congruent_form;  // (JA C)* (J - C J C*) (JA C)
  double residual = 0.0;         // Frobenius distance of the two forms
  PsdVerdict verdict;            // of the gap
};

SquareTransformationCheck square_transformation_check(const ComplexMatrix& a,
                                                      const ComplexMatrix& c,
                                                      const KreinSpace& space,
                                                      double tol_rel = 1e-9);

/// Scalar multiples of the identity turn the convexity gap into
/// defect * J: indefinite whenever the scalar convexity defect
/// (f(alpha)+f(beta))/2 - f((alpha+beta)/2) is nonzero and the space is
/// indefinite.  Convexity over an indefinite symmetry is that rigid.
struct ScalarTriviality {
  double defect = 0.0;
  ComplexMatrix gap;  // defect * J
  OrderVerdict order;
};

ScalarTriviality scalar_triviality_demo(const AnalyticFunction& f, double alpha,
                                        double beta, const KreinSpace& space,
                                        double tol_rel = 1e-9);

/// Classical convexity embeds: PSD operators P, Q on a Hilbert space,
/// placed in the top block of (C^{2n}, diag(I, -I)) with f extended
/// blockwise through its declared value at zero, produce a Krein gap
/// equal to diag(classical gap, 0).  The embedded verdict is leq exactly
/// when classical operator convexity holds for the pair.
struct HilbertEmbedding {
  KreinSpace space;
  ComplexMatrix embedded_a, embedded_b;
  ComplexMatrix classical_gap;
  ComplexMatrix krein_gap;
  double block_residual = 0.0;
  OrderVerdict order;
};

HilbertEmbedding hilbert_embedding_check(const AnalyticFunction& f,
                                         const ComplexMatrix& p,
                                         const ComplexMatrix& q, double lambda,
                                         double tol_rel = 1e-9);

/// Augmented objects for the transformation-inequality proof route:
/// X = diag(A, 0) on the codomain symmetry, the julia matrix U of C, and
/// its twin V = U diag(I, -I).
struct AugmentedInstance {
  ComplexMatrix a, c;
  JuliaOperator jop;
  ComplexMatrix x, u, v;
  KreinSpace base, domain, codomain;
};

/// Requires J-positive A and an invertible J-contraction C (so the
/// augmented spaces match in size).
AugmentedInstance build_augmented(const ComplexMatrix& a,
                                  const ComplexMatrix& c,
                                  const KreinSpace& space,
                                  double tol_rel = 1e-9);

/// The seven-step route from midpoint convexity to the transformation
/// inequality, each step reported with its residual or verdict:
///   1 augmented-positivity    X is Jtilde-positive
///   2 augmented-unitarity     U and V are Jtilde-unitary
///   3 mean-collapse           (U#XU + V#XV)/2 = diag(C#AC, D#AD)
///   4 spectrum-preservation   sigma(U#XU) = sigma(X)
///   5 midpoint-convexity      the gap for the pair (U#XU, V#XV) is PSD
///   6 function-covariance     f(U#XU) = U# f(X) U
///   7 jensen-projection       the top block of the step-5 gap is the
///                             transformation gap, and that gap is PSD
/// Step 5 is where the square function breaks down: its failure localizes
/// the obstruction while steps 1-4 and 6 keep holding.  v_override swaps
/// in a corrupted twin for fault injection.
std::vector<StepReport> run_chain(const AugmentedInstance& inst,
                                  const AnalyticFunction& f,
                                  double tol_rel = 1e-9,
                                  const ComplexMatrix* v_override = nullptr);

/// Randomized hunt for convexity violations among invertible J-positive
/// pairs at the midpoint weight.  On a two-dimensional space of signature
/// (1, 1) the first probe is the canonical witness pair transported into
/// the J-eigenbasis; the square function fails already there.  Probes
/// that violate the function's spectral hypotheses are counted and
/// skipped.
struct CounterexampleResult {
  bool found = false;
  std::size_t probes = 0;
  double lambda = 0.5;
  ComplexMatrix a, b, gap;
  OrderRelation relation = OrderRelation::equal;
};

CounterexampleResult counterexample_search(const AnalyticFunction& f,
                                           const KreinSpace& space,
                                           std::size_t budget, Rng& rng,
                                           double tol_rel = 1e-9);

}  // namespace kreinkit
