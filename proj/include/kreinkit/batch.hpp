#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <type_traits>
#include <vector>

namespace kreinkit {

/// Data-parallel drivers for seeded batch suites.  The contract that makes
/// them interchangeable: the worker must be a pure function of its index
/// (seed any randomness with Rng::stream keyed by that index).  Under that
/// contract the parallel driver is bit-identical to the serial one for any
/// thread count or schedule, and the serial build stays the reference the
/// parallel build is tested against.

enum class ExecutionPolicy { serial, parallel };

/// out[i] = fn(i) for i in [0, count).  The result type must be default
/// constructible.  If workers throw, the exception surfaced is the one
/// from the lowest throwing index, matching what the serial loop does.
template <typename Fn>
auto map_indexed(std::size_t count, Fn&& fn, ExecutionPolicy policy)
    -> std::vector<std::decay_t<decltype(fn(std::size_t{0}))>> {
  using T = std::decay_t<decltype(fn(std::size_t{0}))>;
  std::vector<T> out(count);
  if (policy == ExecutionPolicy::serial) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t si = 0; si < static_cast<std::int64_t>(count); ++si) {
    const std::size_t i = static_cast<std::size_t>(si);
    try {
      out[i] = fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
  return out;
}

/// Smallest index in [0, count) where pred(i) is true, or nullopt.  The
/// parallel driver evaluates one block at a time so it can stop early yet
/// still report the same index as the serial scan; within a block, an
/// exception at index k outranks any hit at an index above k, again
/// matching the serial order of events.
template <typename Pred>
std::optional<std::size_t> find_first(std::size_t count, Pred&& pred,
                                      ExecutionPolicy policy,
                                      std::size_t block = 64) {
  if (policy == ExecutionPolicy::serial) {
    for (std::size_t i = 0; i < count; ++i) {
      if (pred(i)) return i;
    }
    return std::nullopt;
  }
  if (block == 0) block = 1;
  for (std::size_t lo = 0; lo < count; lo += block) {
    const std::size_t hi = std::min(lo + block, count);
    std::vector<unsigned char> hits(hi - lo, 0);
    std::vector<std::exception_ptr> errors(hi - lo);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t sk = 0; sk < static_cast<std::int64_t>(hi - lo); ++sk) {
      const std::size_t k = static_cast<std::size_t>(sk);
      try {
        hits[k] = pred(lo + k) ? 1 : 0;
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
    for (std::size_t k = 0; k < hi - lo; ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      if (hits[k]) return lo + k;
    }
  }
  return std::nullopt;
}

}  // namespace kreinkit
