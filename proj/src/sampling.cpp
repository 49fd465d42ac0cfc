#include "kreinkit/sampling.hpp"

#include <cmath>
#include <sstream>

#include "kreinkit/error.hpp"
#include "kreinkit/linalg.hpp"

namespace kreinkit {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double j_unitarity_residual(const ComplexMatrix& u, const KreinSpace& space) {
  return max_abs_diff(u.adjoint() * space.j() * u, space.j());
}

}  // namespace

KreinSpace sample_space(Rng& rng, std::size_t p, std::size_t q) {
  if (p < 1 || q < 1) {
    throw DimensionError("sample_space: signature needs p >= 1 and q >= 1");
  }
  const std::size_t n = p + q;
  const ComplexMatrix h = hermitian_part(rng.ginibre(n, n));
  const ComplexMatrix v = hermitian_eig(h).eigenvectors;
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = i < p ? 1.0 : -1.0;
  // Re-symmetrize to strip the roundoff skew of the triple product.
  const ComplexMatrix j = hermitian_part(v * d * v.adjoint());
  return KreinSpace(j);
}

ComplexMatrix sample_j_positive(const KreinSpace& space, Rng& rng,
                                bool invertible) {
  const std::size_t n = space.dim();
  const ComplexMatrix h = rng.ginibre(n, n);
  ComplexMatrix gram = h * h.adjoint();
  if (invertible) {
    const double lam_max = spectral_norm(gram);
    const double eps = 0.05 * (1.0 + lam_max);
    gram = gram + eps * ComplexMatrix::identity(n);
  }
  gram = (1.0 / spectral_norm(gram)) * gram;
  const ComplexMatrix a = space.j() * gram;
  if (!is_j_positive(a, space)) {
    throw NumericalError("sample_j_positive: emitted sample failed its own "
                         "positivity certificate");
  }
  if (invertible && !is_invertible(a)) {
    throw NumericalError("sample_j_positive: invertible sample is singular");
  }
  return a;
}

ComplexMatrix j_unitary_from_generator(const KreinSpace& space,
                                       const ComplexMatrix& s) {
  if (!s.square() || s.rows() != space.dim()) {
    throw DimensionError("j_unitary_from_generator: generator shape mismatch");
  }
  const double skew = max_abs_diff(s.adjoint(), -1.0 * s);
  if (skew > 1e-12 * std::max(1.0, s.frobenius_norm())) {
    std::ostringstream os;
    os << "j_unitary_from_generator: generator is not skew-Hermitian "
          "(residual "
       << skew << ")";
    throw HypothesisError("skew-hermitian-generator", os.str());
  }
  const ComplexMatrix u = expm(space.j() * s);
  const double res = j_unitarity_residual(u, space);
  if (res > 1e-9) {
    std::ostringstream os;
    os << "j_unitary_from_generator: result fails U* J U = J (residual "
       << res << ")";
    throw NumericalError(os.str());
  }
  return u;
}

ComplexMatrix sample_j_unitary(const KreinSpace& space, Rng& rng) {
  const std::size_t n = space.dim();
  ComplexMatrix g = rng.ginibre(n, n);
  ComplexMatrix s = 0.5 * (g - g.adjoint());
  const double norm = s.frobenius_norm();
  if (norm > 0.0) s = (0.4 / norm) * s;
  return j_unitary_from_generator(space, s);
}

ComplexMatrix contraction_from_factors(const KreinSpace& space,
                                       const ComplexMatrix& u1,
                                       const std::vector<Complex>& sigma,
                                       const ComplexMatrix& u2) {
  const std::size_t n = space.dim();
  if (sigma.size() != n) {
    throw DimensionError("contraction_from_factors: need one modulus per "
                         "space dimension");
  }
  for (const ComplexMatrix* u : {&u1, &u2}) {
    if (!u->square() || u->rows() != n) {
      throw DimensionError("contraction_from_factors: factor shape mismatch");
    }
    if (j_unitarity_residual(*u, space) > 1e-9) {
      throw HypothesisError("j-unitary-factor",
                            "contraction_from_factors: factor is not J-unitary");
    }
  }
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = sigma[i];
  const ComplexMatrix& b = space.eigenbasis();
  const ComplexMatrix c = u1 * (b * d * b.adjoint()) * u2;
  if (!j_contraction_verdict(c, space).positive_semidefinite()) {
    throw HypothesisError("j-contraction",
                          "contraction_from_factors: assembled operator is "
                          "not a J-contraction (check the moduli split)");
  }
  if (!is_invertible(c)) {
    throw HypothesisError("invertible-input",
                          "contraction_from_factors: assembled operator is "
                          "singular");
  }
  return c;
}

ComplexMatrix sample_invertible_j_contraction(const KreinSpace& space,
                                              Rng& rng) {
  const std::size_t n = space.dim();
  std::vector<Complex> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mod = i < space.positive_dim() ? rng.log_uniform(0.1, 1.0)
                                                : rng.log_uniform(1.0, 10.0);
    const double phase = rng.uniform(0.0, kTwoPi);
    sigma[i] = mod * Complex(std::cos(phase), std::sin(phase));
  }
  const ComplexMatrix u1 = sample_j_unitary(space, rng);
  const ComplexMatrix u2 = sample_j_unitary(space, rng);
  try {
    return contraction_from_factors(space, u1, sigma, u2);
  } catch (const HypothesisError& e) {
    // By construction the factors satisfy every hypothesis; reclassify.
    throw NumericalError(std::string("sample_invertible_j_contraction: "
                                     "emitted sample failed verification: ") +
                         e.what());
  }
}

}  // namespace kreinkit
