#pragma once

#include <cstddef>
#include <vector>

#include "kreinkit/krein.hpp"
#include "kreinkit/matrix.hpp"
#include "kreinkit/rng.hpp"

namespace kreinkit {

/// Seeded generators for Krein-space test instances.  Every sampler
/// verifies its own defining predicate before returning; a verification
/// failure is an internal bug and throws NumericalError.  Drive each call
/// with Rng::stream(master, tag, index) to make batches order- and
/// thread-independent.

/// Krein space with a dense fundamental symmetry of signature (p, q):
/// J = V diag(I_p, -I_q) V* for a random unitary V.  Requires p, q >= 1.
KreinSpace sample_space(Rng& rng, std::size_t p, std::size_t q);

/// J-positive operator J G with G = H H* (+ eps I when `invertible`,
/// eps = 0.05 (1 + lambda_max)), scaled to unit spectral norm.
ComplexMatrix sample_j_positive(const KreinSpace& space, Rng& rng,
                                bool invertible = true);

/// expm(J S) for skew-Hermitian S; always J-unitary.  Rejects S that is
/// not skew-Hermitian (HypothesisError) and certifies U* J U = J to 1e-9.
ComplexMatrix j_unitary_from_generator(const KreinSpace& space,
                                       const ComplexMatrix& s);

/// Random J-unitary: j_unitary_from_generator with a random skew-Hermitian
/// S scaled to Frobenius norm 0.4.
ComplexMatrix sample_j_unitary(const KreinSpace& space, Rng& rng);

/// U1 (B diag(sigma) B*) U2 for the J-eigenbasis B and (J-unitary) U1, U2.
/// Certifies the result is an invertible J-contraction; HypothesisError
/// when the factors fail their predicates (non-J-unitary U, moduli on the
/// wrong side of 1).
ComplexMatrix contraction_from_factors(const KreinSpace& space,
                                       const ComplexMatrix& u1,
                                       const std::vector<Complex>& sigma,
                                       const ComplexMatrix& u2);

/// Random invertible J-contraction U1 (B Sigma B*) U2: Sigma moduli drawn
/// log-uniform in [0.1, 1] on the +1 block and [1, 10] on the -1 block
/// with uniform phases; U1, U2 from sample_j_unitary.
ComplexMatrix sample_invertible_j_contraction(const KreinSpace& space,
                                              Rng& rng);

}  // namespace kreinkit
