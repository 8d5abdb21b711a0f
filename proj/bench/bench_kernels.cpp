// Serial reference vs OpenMP kernels on representative desk-scale grids.
// Run with ELVAR_BENCH_THREADS or OMP_NUM_THREADS to vary the thread count.

#include <benchmark/benchmark.h>

#include "elvar/assembly.hpp"
#include "elvar/energy.hpp"
#include "elvar/kernels.hpp"
#include "elvar/rng.hpp"
#include "elvar/verify.hpp"

namespace {

using namespace elvar;

WeightGrid square_grid(int side) {
  Rng rng(42);
  std::vector<double> entries(static_cast<std::size_t>(side + 1) * (side + 1), 0.0);
  for (int i = 1; i <= side; ++i)
    for (int j = 1; j <= side; ++j)
      entries[static_cast<std::size_t>(i) * (side + 1) + j] = rng.uniform(0.5, 2.0);
  return WeightGrid(side, side, std::move(entries));
}

void bm_matvec_serial(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const WeightGrid grid = square_grid(side);
  const SystemMatrix matrix = assemble_M(grid);
  Rng rng(7);
  GridFunction x = random_grid_function(rng, side, side, 1.0);
  std::vector<double> y(static_cast<std::size_t>(matrix.order()));
  for (auto _ : state) {
    kernels::serial::banded_matvec(matrix.order(), matrix.half_bandwidth(),
                                   matrix.bands().data(), x.flat().data(), y.data());
    benchmark::DoNotOptimize(y.data());
    benchmark::ClobberMemory();
  }
}

void bm_matvec_omp(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const WeightGrid grid = square_grid(side);
  const SystemMatrix matrix = assemble_M(grid);
  Rng rng(7);
  GridFunction x = random_grid_function(rng, side, side, 1.0);
  std::vector<double> y(static_cast<std::size_t>(matrix.order()));
  for (auto _ : state) {
    kernels::banded_matvec(matrix.order(), matrix.half_bandwidth(), matrix.bands().data(),
                           x.flat().data(), y.data());
    benchmark::DoNotOptimize(y.data());
    benchmark::ClobberMemory();
  }
}

void bm_jacobi_serial(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const SystemMatrix matrix = assemble_M(square_grid(side));
  for (auto _ : state) {
    auto r = kernels::serial::jacobi_eigenvalues(matrix.dense(), matrix.order(), 100, 1e-12);
    benchmark::DoNotOptimize(r.eigenvalues.data());
  }
}

void bm_jacobi_omp(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const SystemMatrix matrix = assemble_M(square_grid(side));
  for (auto _ : state) {
    auto r = kernels::jacobi_eigenvalues(matrix.dense(), matrix.order(), 100, 1e-12);
    benchmark::DoNotOptimize(r.eigenvalues.data());
  }
}

// psi with quadrature-mode primitives is the expensive per-node map.
void bm_psi_quadrature(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  WeightGrid grid = square_grid(side);
  NonlinearitySpec nl =
      NonlinearitySpec::rational_quartic().with_primitive_mode(PrimitiveMode::quadrature);
  ProblemInstance instance(std::move(grid), std::move(nl));
  Rng rng(7);
  const GridFunction u = random_grid_function(rng, side, side, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(psi(instance, u));
  }
}

}  // namespace

BENCHMARK(bm_matvec_serial)->Arg(16)->Arg(50);
BENCHMARK(bm_matvec_omp)->Arg(16)->Arg(50);
BENCHMARK(bm_jacobi_serial)->Arg(8)->Arg(16);
BENCHMARK(bm_jacobi_omp)->Arg(8)->Arg(16);
BENCHMARK(bm_psi_quadrature)->Arg(16)->Arg(50);

BENCHMARK_MAIN();
