#pragma once

#include <cstddef>
#include <cstdint>

namespace kreinkit {

/// Tolerance set shared across the toolkit.  Every threshold that a verdict
/// or residual check depends on lives here so a run can be tightened or
/// relaxed as a whole (CLI --tol / KREINKIT_TOL override verdict_rel and
/// batch_margin together).
struct Tolerances {
  /// PSD verdict band, relative to max(1, spectral norm of the operand).
  double verdict_rel = 1e-9;
  /// Rank cutoff for PSD factorization, relative to the largest eigenvalue.
  double rank_rel = 1e-10;
  /// Invertibility: smallest singular value >= invertibility * largest.
  double invertibility = 1e-8;
  /// Contour quadrature stopping rule, relative to 1 + ||result||.
  double quadrature_rel = 1e-10;
  /// Structural residual checks (factorizations, defect identities),
  /// relative to max(1, scale of the operands).
  double residual_rel = 1e-9;
  /// Property-suite PSD margin: lambda_min >= -batch_margin * ||gap||_F.
  double batch_margin = 1e-8;
};

namespace defaults {

/// Hard cap on matrix dimension in the decomposition kernels.
inline constexpr std::size_t kMaxSpectrumDim = 32;

/// Contour construction: eigenvalues closer than 4x the clearance are merged
/// into one circle; the clearance defaults to kClearanceDiamFactor times the
/// spectral diameter with an absolute floor of kClearanceFloor.
inline constexpr double kClearanceFloor = 1e-3;
inline constexpr double kClearanceDiamFactor = 0.05;

/// Quadrature nodes per circle: initial count and doubling budget.
inline constexpr std::size_t kQuadratureInitialNodes = 32;
inline constexpr std::size_t kQuadratureNodeBudget = std::size_t{1} << 14;

/// Nodes are summed in fixed blocks of this size (blocks reduced in index
/// order) so parallel and serial runs produce bit-identical sums.
inline constexpr std::size_t kQuadratureBlockNodes = 256;

/// Clearance shrink factor toward the nearest excluded point; 0.45 < 1/2
/// keeps the 2x-clearance feasibility precondition satisfiable.
inline constexpr double kClearanceExcludedFactor = 0.45;

/// Eigenvector-basis condition cap for the spectral calculus route.
inline constexpr double kSpectralConditionCap = 1e6;

/// Fundamental symmetry certification: ||J - J*|| and ||J^2 - I||.
inline constexpr double kSymmetryTol = 1e-12;

/// Master seed default.  The seed label below is pinned; the numeric value
/// is its FNV-1a 64-bit hash so reports stay reproducible byte-for-byte.
inline constexpr const char* kMasterSeedLabel = "0xKREIN";
std::uint64_t master_seed_value() noexcept;

}  // namespace defaults
}  // namespace kreinkit
