// Timing comparison of the serial reference drivers against the OpenMP
// ones, over the two kernels that carry the parallel work: seeded batch
// suites (map_indexed) and contour quadrature (block-parallel node loop).
// Exits nonzero if any parallel result deviates from its serial reference
// by a single bit, so the quick mode doubles as a smoke test.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "kreinkit/analytic.hpp"
#include "kreinkit/batch.hpp"
#include "kreinkit/defaults.hpp"
#include "kreinkit/funcalc.hpp"
#include "kreinkit/julia.hpp"
#include "kreinkit/krein.hpp"
#include "kreinkit/matrix.hpp"
#include "kreinkit/rng.hpp"
#include "kreinkit/sampling.hpp"

using namespace kreinkit;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

int threads_available() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Full certification of one seeded Julia instance; the per-suite unit of
// work for the batch benchmark.
double julia_work(std::size_t dim, std::size_t idx) {
  Rng srng = Rng::stream(defaults::master_seed_value(), "bench-space", idx);
  const KreinSpace space = sample_space(srng, dim - 1, 1);
  Rng rng = Rng::stream(defaults::master_seed_value(), "bench-work", idx);
  const ComplexMatrix c = sample_invertible_j_contraction(space, rng);
  const JuliaOperator jop = julia_operator(c, space);
  return verify_julia(julia_assemble(jop, space), space).residual;
}

struct BenchLine {
  std::string name;
  double serial_ms = 0.0;
  double parallel_ms = 0.0;
  bool identical = false;
};

void print_line(const BenchLine& line) {
  const double speedup =
      line.parallel_ms > 0.0 ? line.serial_ms / line.parallel_ms : 0.0;
  std::printf("%-22s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   identical %s\n",
              line.name.c_str(), line.serial_ms, line.parallel_ms, speedup,
              line.identical ? "yes" : "NO");
}

BenchLine bench_batch(std::size_t count, std::size_t dim) {
  BenchLine line;
  line.name = "julia-suite n=" + std::to_string(count);
  const auto work = [dim](std::size_t idx) { return julia_work(dim, idx); };

  double t0 = now_ms();
  const std::vector<double> serial =
      map_indexed(count, work, ExecutionPolicy::serial);
  line.serial_ms = now_ms() - t0;

  t0 = now_ms();
  const std::vector<double> parallel =
      map_indexed(count, work, ExecutionPolicy::parallel);
  line.parallel_ms = now_ms() - t0;

  line.identical = serial == parallel;
  return line;
}

BenchLine bench_quadrature(std::size_t dim, double quadrature_rel) {
  BenchLine line;
  line.name = "contour dim=" + std::to_string(dim);

  Rng rng = Rng::stream(defaults::master_seed_value(), "bench-quad", 0);
  // Shifted Ginibre: well separated spectrum inside a generous circle, so
  // convergence takes a few thousand nodes and the node loop dominates.
  ComplexMatrix a = rng.ginibre(dim, dim);
  a = 0.25 * a;
  for (std::size_t i = 0; i < dim; ++i) {
    a(i, i) += Complex(1.0 + 0.5 * static_cast<double>(i), 0.0);
  }
  const AnalyticFunction f = AnalyticFunction::parse("exp");
  Contour contour;
  contour.clearance = 0.5;
  contour.circles.push_back(
      {Complex(1.0 + 0.25 * static_cast<double>(dim), 0.0),
       1.5 + 0.3 * static_cast<double>(dim), defaults::kQuadratureInitialNodes});

  set_threads(1);
  double t0 = now_ms();
  const ContourResult serial = calculus_contour(f, a, contour, quadrature_rel);
  line.serial_ms = now_ms() - t0;

  set_threads(threads_available());
  t0 = now_ms();
  const ContourResult parallel =
      calculus_contour(f, a, contour, quadrature_rel);
  line.parallel_ms = now_ms() - t0;

  line.identical = max_abs_diff(serial.value, parallel.value) == 0.0 &&
                   serial.nodes_per_circle == parallel.nodes_per_circle;
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      quick = true;
    } else {
      std::fprintf(stderr, "usage: %s [--quick]\n", argv[0]);
      return 64;
    }
  }

  std::printf("threads available: %d\n", threads_available());

  std::vector<BenchLine> lines;
  lines.push_back(bench_batch(quick ? 24 : 192, quick ? 4 : 6));
  lines.push_back(bench_quadrature(quick ? 6 : 10, quick ? 1e-10 : 1e-12));

  bool ok = true;
  for (const BenchLine& line : lines) {
    print_line(line);
    ok = ok && line.identical;
  }
  if (!ok) {
    std::fprintf(stderr,
                 "parallel results deviate from the serial reference\n");
    return 1;
  }
  return 0;
}
