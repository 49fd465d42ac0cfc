#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "kreinkit/matrix.hpp"

namespace kreinkit {

/// Deterministic random stream.  A master seed is split into independent
/// per-sample streams keyed by (purpose tag, sample index), so batch items
/// can be generated in any order or thread count with identical results.
/// Normals come from Box-Muller over the raw mt19937_64 output rather than
/// std::normal_distribution, whose mapping is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Stream for sample `index` of the batch identified by `tag`.
  static Rng stream(std::uint64_t master_seed, const std::string& tag,
                    std::uint64_t index);

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double log_uniform(double lo, double hi);
  double normal();
  Complex complex_normal();  // standard complex Gaussian
  std::uint64_t next_u64() { return gen_(); }
  std::uint64_t uniform_index(std::uint64_t n);  // [0, n)

  /// Ginibre-style matrix: i.i.d. standard complex Gaussian entries.
  ComplexMatrix ginibre(std::size_t rows, std::size_t cols);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// FNV-1a 64-bit hash; used for seed labels and stream tags.
std::uint64_t fnv1a64(const std::string& s) noexcept;

/// splitmix64 finalizer; decorrelates derived seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace kreinkit
