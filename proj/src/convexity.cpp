#include "kreinkit/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "kreinkit/error.hpp"
#include "kreinkit/funcalc.hpp"
#include "kreinkit/linalg.hpp"
#include "kreinkit/sampling.hpp"

namespace kreinkit {

namespace {

void require_j_positive(const ComplexMatrix& m, const KreinSpace& space,
                        double tol_rel, const char* who, const char* which) {
  const PsdVerdict v = j_positive_verdict(m, space, tol_rel);
  if (!v.positive_semidefinite()) {
    std::ostringstream os;
    os << who << ": operand " << which << " is not J-positive (J "
       << which << " is " << to_string(v.verdict) << ", min eigenvalue "
       << v.min_eigenvalue << ")";
    throw HypothesisError("j-positive-input", os.str());
  }
}

// Transformation-inequality hypotheses on the function: analytic at 0
// (the augmentation adjoins 0 to the spectrum) and f(0) = 0 (so the
// augmented block projects back onto the plain gap).
void require_jensen_function(const AnalyticFunction& f) {
  const double d0 = f.distance_to_excluded(Complex(0.0, 0.0));
  if (d0 < 2.0 * defaults::kClearanceFloor) {
    Complex nearest(0.0, 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& p : f.excluded_points()) {
      if (std::abs(p) < best) {
        best = std::abs(p);
        nearest = p;
      }
    }
    std::ostringstream os;
    os << "transformation hypotheses need f analytic at 0: the excluded "
          "point ("
       << nearest.real() << ", " << nearest.imag() << ") of " << f.name()
       << " lies " << d0 << " away from 0";
    throw HypothesisError("excluded-point", os.str());
  }
  const auto v0 = f.value_at_zero();
  if (!v0.has_value() || std::abs(*v0) > 1e-12) {
    std::ostringstream os;
    os << "transformation hypotheses need f(0) = 0, but " << f.name();
    if (v0.has_value()) {
      os << " has f(0) = " << v0->real();
    } else {
      os << " declares no value at 0";
    }
    throw HypothesisError("zero-value", os.str());
  }
}

// Every point must keep twice the default clearance away from the
// excluded points of f; violations name both points.
void require_admissible_spectra(const AnalyticFunction& f,
                                const std::vector<Complex>& points,
                                const char* what) {
  if (f.excluded_points().empty() || points.empty()) return;
  const double clearance = default_clearance(points, f);
  for (const Complex& z : points) {
    const double dist = f.distance_to_excluded(z);
    if (dist < 2.0 * clearance) {
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
      os << what << " point (" << z.real() << ", " << z.imag()
         << ") lies within twice the clearance " << clearance
         << " of the excluded point (" << nearest.real() << ", "
         << nearest.imag() << ") of " << f.name();
      throw HypothesisError("spectrum-clearance", os.str());
    }
  }
}

StepReport report_from_residual(const char* name, double residual, double tol,
                                std::string details) {
  StepReport r;
  r.step_name = name;
  r.residual = residual;
  r.tolerance = tol;
  r.passed = residual <= tol;
  r.details = std::move(details);
  return r;
}

}  // namespace

ConvexityVerdict convexity_verdict(const AnalyticFunction& f,
                                   const ComplexMatrix& a,
                                   const ComplexMatrix& b, double lambda,
                                   const KreinSpace& space, double tol_rel) {
  if (!a.square() || a.rows() != space.dim() || !b.square() ||
      b.rows() != space.dim()) {
    throw DimensionError("convexity_verdict: operands must be square on the "
                         "space");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream os;
    os << "convexity_verdict: mixing weight " << lambda
       << " lies outside [0, 1]";
    throw HypothesisError("mixing-parameter", os.str());
  }
  require_j_positive(a, space, tol_rel, "convexity_verdict", "A");
  require_j_positive(b, space, tol_rel, "convexity_verdict", "B");

  ConvexityVerdict out;
  out.mixture = (1.0 - lambda) * a + lambda * b;

  if (!f.excluded_points().empty()) {
    std::vector<Complex> points = spectrum(a);
    for (const Complex& z : spectrum(b)) points.push_back(z);
    for (const Complex& z : spectrum(out.mixture)) points.push_back(z);
    require_admissible_spectra(f, points, "spectrum");
  }

  const ComplexMatrix value_mix =
      (1.0 - lambda) * apply_function(f, a) + lambda * apply_function(f, b);
  const ComplexMatrix mix_value = apply_function(f, out.mixture);
  out.gap = hermitian_part(space.j() * (value_mix - mix_value));
  out.order = order_from_gap(out.gap, tol_rel);
  return out;
}

JensenVerdict jensen_verdict(const AnalyticFunction& f, const ComplexMatrix& a,
                             const ComplexMatrix& c, const KreinSpace& space,
                             double tol_rel) {
  if (!a.square() || a.rows() != space.dim() || !c.square() ||
      c.rows() != space.dim()) {
    throw DimensionError("jensen_verdict: operands must be square on the "
                         "space");
  }
  require_jensen_function(f);
  require_j_positive(a, space, tol_rel, "jensen_verdict", "A");
  const PsdVerdict contraction = j_contraction_verdict(c, space, tol_rel);
  if (!contraction.positive_semidefinite()) {
    std::ostringstream os;
    os << "jensen_verdict: C is not a J-contraction (gap J - C*JC is "
       << to_string(contraction.verdict) << ", min eigenvalue "
       << contraction.min_eigenvalue << ")";
    throw HypothesisError("j-contraction", os.str());
  }

  JensenVerdict out;
  const ComplexMatrix csharp = j_adjoint(c, space);
  out.transformed = csharp * a * c;

  if (!f.excluded_points().empty()) {
    std::vector<Complex> points = spectrum(a);
    points.push_back(Complex(0.0, 0.0));
    for (const Complex& z : spectrum(out.transformed)) points.push_back(z);
    require_admissible_spectra(f, points, "spectrum");
  }

  out.gap = hermitian_part(
      space.j() *
      (csharp * apply_function(f, a) * c - apply_function(f, out.transformed)));
  out.order = order_from_gap(out.gap, tol_rel);
  return out;
}

ComplexMatrix jensen_raw_gap(const AnalyticFunction& f, const ComplexMatrix& a,
                             const ComplexMatrix& c, const KreinSpace& space) {
  const ComplexMatrix csharp = j_adjoint(c, space);
  return hermitian_part(space.j() * (csharp * apply_function(f, a) * c -
                                     apply_function(f, csharp * a * c)));
}

SquareTransformationCheck square_transformation_check(const ComplexMatrix& a,
                                                      const ComplexMatrix& c,
                                                      const KreinSpace& space,
                                                      double tol_rel) {
  require_j_positive(a, space, tol_rel, "square_transformation_check", "A");
  const PsdVerdict contraction = j_contraction_verdict(c, space, tol_rel);
  if (!contraction.positive_semidefinite()) {
    throw HypothesisError("j-contraction",
                          "square_transformation_check: C is not a "
                          "J-contraction");
  }

  const ComplexMatrix csharp = j_adjoint(c, space);
  const ComplexMatrix csac = csharp * a * c;

  SquareTransformationCheck out;
  out.gap = hermitian_part(space.j() * (csharp * a * a * c - csac * csac));

  // J (C# A^2 C - (C#AC)^2) = (JA C)* (J - C J C*) (JA C).
  const ComplexMatrix atilde_c = space.j() * a * c;
  const ComplexMatrix sharp_gap =
      space.j() - c * space.j() * c.adjoint();
  out.congruent_form =
      hermitian_part(atilde_c.adjoint() * sharp_gap * atilde_c);

  out.residual = (out.gap - out.congruent_form).frobenius_norm();
  out.verdict = psd_verdict(out.gap, tol_rel);
  return out;
}

ScalarTriviality scalar_triviality_demo(const AnalyticFunction& f,
                                        double alpha, double beta,
                                        const KreinSpace& space,
                                        double tol_rel) {
  const Complex fa = f.evaluate(Complex(alpha, 0.0));
  const Complex fb = f.evaluate(Complex(beta, 0.0));
  const Complex fm = f.evaluate(Complex(0.5 * (alpha + beta), 0.0));
  ScalarTriviality out;
  out.defect = 0.5 * (fa.real() + fb.real()) - fm.real();
  out.gap = out.defect * space.j();
  out.order = order_from_gap(out.gap, tol_rel);
  return out;
}

HilbertEmbedding hilbert_embedding_check(const AnalyticFunction& f,
                                         const ComplexMatrix& p,
                                         const ComplexMatrix& q, double lambda,
                                         double tol_rel) {
  if (!p.square() || !q.square() || p.rows() != q.rows()) {
    throw DimensionError("hilbert_embedding_check: P and Q must be square "
                         "and of equal size");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw HypothesisError("mixing-parameter",
                          "hilbert_embedding_check: mixing weight outside "
                          "[0, 1]");
  }
  const std::size_t n = p.rows();
  for (const auto* m : {&p, &q}) {
    const PsdVerdict v = psd_verdict(*m, tol_rel);
    if (!v.positive_semidefinite()) {
      std::ostringstream os;
      os << "hilbert_embedding_check: operand is " << to_string(v.verdict)
         << ", not PSD";
      throw HypothesisError("psd-input", os.str());
    }
  }
  const auto v0 = f.value_at_zero();
  if (!v0.has_value()) {
    throw HypothesisError("zero-value",
                          "hilbert_embedding_check: " + f.name() +
                              " declares no value at 0 for the zero block");
  }

  const ComplexMatrix jtilde = direct_sum(
      ComplexMatrix::identity(n), -1.0 * ComplexMatrix::identity(n));

  const ComplexMatrix mixture = (1.0 - lambda) * p + lambda * q;
  const ComplexMatrix fp = apply_function(f, p);
  const ComplexMatrix fq = apply_function(f, q);
  const ComplexMatrix fmix = apply_function(f, mixture);
  const ComplexMatrix v0_block = v0->real() * ComplexMatrix::identity(n);

  HilbertEmbedding out{KreinSpace(jtilde),
                       direct_sum(p, ComplexMatrix(n, n)),
                       direct_sum(q, ComplexMatrix(n, n)),
                       ComplexMatrix(),
                       ComplexMatrix(),
                       0.0,
                       OrderVerdict{}};

  out.classical_gap =
      hermitian_part((1.0 - lambda) * fp + lambda * fq - fmix);
  const ComplexMatrix value_mix = (1.0 - lambda) * direct_sum(fp, v0_block) +
                                  lambda * direct_sum(fq, v0_block);
  const ComplexMatrix mix_value = direct_sum(fmix, v0_block);
  out.krein_gap = hermitian_part(jtilde * (value_mix - mix_value));
  out.block_residual =
      (out.krein_gap - direct_sum(out.classical_gap, ComplexMatrix(n, n)))
          .frobenius_norm();
  out.order = order_from_gap(out.krein_gap, tol_rel);
  return out;
}

AugmentedInstance build_augmented(const ComplexMatrix& a,
                                  const ComplexMatrix& c,
                                  const KreinSpace& space, double tol_rel) {
  require_j_positive(a, space, tol_rel, "build_augmented", "A");
  if (!is_invertible(c)) {
    throw HypothesisError("invertible-input",
                          "build_augmented: C must be invertible so the "
                          "augmented spaces match");
  }
  JuliaOperator jop = julia_operator(c, space, tol_rel);
  const ComplexMatrix u = julia_assemble(jop, space);
  const ComplexMatrix sign_flip = direct_sum(
      ComplexMatrix::identity(space.dim()),
      -1.0 * ComplexMatrix::identity(jop.r1));
  const ComplexMatrix v = u * sign_flip;
  const ComplexMatrix x =
      direct_sum(a, ComplexMatrix(jop.r2, jop.r2));
  KreinSpace domain = julia_domain_space(jop, space);
  KreinSpace codomain = julia_codomain_space(jop, space);
  return AugmentedInstance{a,      c, std::move(jop), x,
                           u,      v, space,          std::move(domain),
                           std::move(codomain)};
}

std::vector<StepReport> run_chain(const AugmentedInstance& inst,
                                  const AnalyticFunction& f, double tol_rel,
                                  const ComplexMatrix* v_override) {
  require_jensen_function(f);
  const std::size_t n = inst.base.dim();
  const ComplexMatrix& v = v_override ? *v_override : inst.v;
  if (v.rows() != inst.u.rows() || v.cols() != inst.u.cols()) {
    throw DimensionError("run_chain: twin operator has the wrong shape");
  }

  const ComplexMatrix csharp = j_adjoint(inst.c, inst.base);
  const ComplexMatrix dsharp = inst.jop.d.adjoint() * inst.base.j();
  const ComplexMatrix csac = csharp * inst.a * inst.c;
  const ComplexMatrix dsad = dsharp * inst.a * inst.jop.d;

  if (!f.excluded_points().empty()) {
    std::vector<Complex> points = spectrum(inst.a);
    points.push_back(Complex(0.0, 0.0));
    for (const Complex& z : spectrum(csac)) points.push_back(z);
    if (dsad.rows() > 0) {
      for (const Complex& z : spectrum(dsad)) points.push_back(z);
    }
    require_admissible_spectra(f, points, "spectrum");
  }

  std::vector<StepReport> steps;
  steps.reserve(7);

  // 1: the augmented operator stays J-positive.
  {
    const PsdVerdict pv = j_positive_verdict(inst.x, inst.codomain, tol_rel);
    StepReport r;
    r.step_name = "augmented-positivity";
    r.residual = std::max(0.0, -pv.min_eigenvalue);
    r.tolerance = pv.tolerance_used;
    r.verdict = pv;
    r.passed = pv.positive_semidefinite();
    r.details = std::string("diag(A, 0) is ") + to_string(pv.verdict) +
                " on the codomain symmetry";
    steps.push_back(std::move(r));
  }

  // 2: U and the sign-flipped twin are unitary between the symmetries.
  {
    const ComplexMatrix usharp = j_adjoint(inst.u, inst.domain, inst.codomain);
    const ComplexMatrix vsharp = j_adjoint(v, inst.domain, inst.codomain);
    const ComplexMatrix eye_dom = ComplexMatrix::identity(inst.domain.dim());
    const ComplexMatrix eye_cod = ComplexMatrix::identity(inst.codomain.dim());
    double residual = (usharp * inst.u - eye_dom).frobenius_norm();
    residual = std::max(residual, (inst.u * usharp - eye_cod).frobenius_norm());
    residual = std::max(residual, (vsharp * v - eye_dom).frobenius_norm());
    residual = std::max(residual, (v * vsharp - eye_cod).frobenius_norm());
    const double tol =
        tol_rel * (1.0 + inst.u.frobenius_norm() + v.frobenius_norm());
    steps.push_back(report_from_residual(
        "augmented-unitarity", residual, tol,
        "U and V = U diag(I, -I) against both compositions"));
  }

  // 3: averaging the two conjugations collapses to the block diagonal.
  const ComplexMatrix y1 =
      j_adjoint(inst.u, inst.domain, inst.codomain) * inst.x * inst.u;
  const ComplexMatrix y2 =
      j_adjoint(v, inst.domain, inst.codomain) * inst.x * v;
  const ComplexMatrix mean = 0.5 * (y1 + y2);
  {
    const ComplexMatrix expected = direct_sum(csac, dsad);
    const double residual = (mean - expected).frobenius_norm();
    const double tol = tol_rel * (1.0 + expected.frobenius_norm());
    steps.push_back(report_from_residual(
        "mean-collapse", residual, tol,
        "(U#XU + V#XV)/2 against diag(C#AC, D#AD)"));
  }

  // 4: conjugation by a unitary preserves the spectrum.
  {
    const std::vector<Complex> sx = spectrum(inst.x);
    const std::vector<Complex> sy = spectrum(y1);
    double spec_diff = 0.0;
    for (std::size_t i = 0; i < sx.size(); ++i) {
      spec_diff = std::max(spec_diff, std::abs(sx[i] - sy[i]));
    }
    const double tol = 1e-8 * (1.0 + inst.x.frobenius_norm());
    steps.push_back(report_from_residual(
        "spectrum-preservation", spec_diff, tol,
        "sorted spectra of U#XU and X"));
  }

  // 5: midpoint convexity for the conjugated pair.  This is the step the
  // square function fails: the obstruction lives in the augmented block.
  const ComplexMatrix fy1 = apply_function(f, y1);
  const ComplexMatrix fy2 = apply_function(f, y2);
  const ComplexMatrix gap5 = hermitian_part(
      inst.domain.j() * (0.5 * (fy1 + fy2) - apply_function(f, mean)));
  {
    const PsdVerdict pv = psd_verdict(gap5, tol_rel);
    StepReport r;
    r.step_name = "midpoint-convexity";
    r.residual = std::max(0.0, -pv.min_eigenvalue);
    r.tolerance = pv.tolerance_used;
    r.verdict = pv;
    r.passed = pv.positive_semidefinite();
    r.details = std::string("gap for the pair (U#XU, V#XV) is ") +
                to_string(pv.verdict);
    steps.push_back(std::move(r));
  }

  // 6: the calculus commutes with the unitary conjugation.
  const ComplexMatrix fx = apply_function(f, inst.x);
  {
    const ComplexMatrix usharp = j_adjoint(inst.u, inst.domain, inst.codomain);
    const ComplexMatrix vsharp = j_adjoint(v, inst.domain, inst.codomain);
    double residual = (fy1 - usharp * fx * inst.u).frobenius_norm();
    residual =
        std::max(residual, (fy2 - vsharp * fx * v).frobenius_norm());
    // f(U#XU) is evaluated on the conjugated operator, whose powers can
    // be far larger than f(X) itself; scale accordingly.
    const double tol =
        1e-8 * (1.0 + fx.frobenius_norm() +
                std::max(fy1.frobenius_norm(), fy2.frobenius_norm()));
    steps.push_back(report_from_residual(
        "function-covariance", residual, tol, "f(U#XU) against U# f(X) U"));
  }

  // 7: compressing the step-5 gap to the base space yields exactly the
  // transformation gap, which must be PSD.
  {
    const ComplexMatrix direct_gap = hermitian_part(
        inst.base.j() *
        (csharp * apply_function(f, inst.a) * inst.c -
         apply_function(f, csac)));
    const ComplexMatrix block = gap5.block(0, 0, n, n);
    const double residual = (block - direct_gap).frobenius_norm();
    const double tol = 1e-8 * (1.0 + direct_gap.frobenius_norm() +
                               gap5.frobenius_norm());
    const PsdVerdict pv = psd_verdict(direct_gap, tol_rel);
    StepReport r;
    r.step_name = "jensen-projection";
    r.residual = residual;
    r.tolerance = tol;
    r.verdict = pv;
    r.passed = residual <= tol && pv.positive_semidefinite();
    r.details = std::string("top block of the step-5 gap; direct gap is ") +
                to_string(pv.verdict);
    steps.push_back(std::move(r));
  }

  return steps;
}

CounterexampleResult counterexample_search(const AnalyticFunction& f,
                                           const KreinSpace& space,
                                           std::size_t budget, Rng& rng,
                                           double tol_rel) {
  CounterexampleResult out;
  const bool canned = space.dim() == 2 && space.positive_dim() == 1 &&
                      space.negative_dim() == 1;

  for (std::size_t probe = 0; probe < budget; ++probe) {
    ComplexMatrix a, b;
    if (probe == 0 && canned) {
      // The canonical witness pair, transported into the J-eigenbasis of
      // the target space.
      const ComplexMatrix a0{{1.0, -1.0}, {1.0, -2.0}};
      const ComplexMatrix b0{{1.0, -1.0}, {1.0, -3.0}};
      const ComplexMatrix& basis = space.eigenbasis();
      a = basis * a0 * basis.adjoint();
      b = basis * b0 * basis.adjoint();
    } else {
      a = sample_j_positive(space, rng);
      b = sample_j_positive(space, rng);
    }
    ++out.probes;
    try {
      ConvexityVerdict v = convexity_verdict(f, a, b, 0.5, space, tol_rel);
      if (v.order.relation != OrderRelation::leq &&
          v.order.relation != OrderRelation::equal) {
        out.found = true;
        out.a = std::move(a);
        out.b = std::move(b);
        out.gap = std::move(v.gap);
        out.relation = v.order.relation;
        return out;
      }
    } catch (const HypothesisError&) {
      // Inadmissible probe (spectrum too close to an excluded point);
      // counted and skipped.
    }
  }
  return out;
}

}  // namespace kreinkit
