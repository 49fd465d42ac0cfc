#include "kreinkit/rng.hpp"

#include <cmath>

#include "kreinkit/defaults.hpp"

namespace kreinkit {

std::uint64_t fnv1a64(const std::string& s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t defaults::master_seed_value() noexcept {
  return fnv1a64(kMasterSeedLabel);
}

Rng Rng::stream(std::uint64_t master_seed, const std::string& tag,
                std::uint64_t index) {
  std::uint64_t s = splitmix64(master_seed ^ fnv1a64(tag));
  s = splitmix64(s ^ (index * 0x9e3779b97f4a7c15ull + 1));
  return Rng(s);
}

double Rng::uniform() {
  // 53 random bits -> [0, 1).
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Complex Rng::complex_normal() {
  // Unit-variance complex Gaussian: real and imaginary parts N(0, 1/2).
  const double scale = 0.7071067811865475244;  // 1/sqrt(2)
  const double re = normal() * scale;
  const double im = normal() * scale;
  return Complex(re, im);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) return 0;
  // Rejection sampling keeps the distribution exactly uniform.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = gen_();
  while (x >= limit) x = gen_();
  return x % n;
}

ComplexMatrix Rng::ginibre(std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = complex_normal();
  return m;
}

}  // namespace kreinkit
