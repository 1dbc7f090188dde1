#include <benchmark/benchmark.h>

#include "vortlab/exact_solutions.hpp"
#include "vortlab/reduction.hpp"
#include "vortlab/spectral.hpp"
#include "vortlab/subgroups.hpp"

using namespace vortlab;

static void BM_SpectralRhsBox(benchmark::State& state) {
  const auto t = std::make_shared<const Truncation>(
      Truncation::box(static_cast<int>(state.range(0)), 1.0, 1.3));
  const Eigen::VectorXd x =
      Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(t->real_dimension()), -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_rhs_real(t, x));
}
BENCHMARK(BM_SpectralRhsBox)->Arg(1)->Arg(2)->Arg(3);

static void BM_ReduceLorenz(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lorenz1960(1.0, 2.0));
}
BENCHMARK(BM_ReduceLorenz);

static void BM_EnumerateSubgroups(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_subgroups());
}
BENCHMARK(BM_EnumerateSubgroups);

static void BM_RossbyResidual(benchmark::State& state) {
  const auto psi = rossby_wave(1.0, 1.0, 2.0, 1.0);
  const auto params = EquationParams::cartesian(1.0);
  const auto grid = Grid::cartesian_default();
  for (auto _ : state) benchmark::DoNotOptimize(residual(psi, params, grid));
}
BENCHMARK(BM_RossbyResidual);
BENCHMARK_MAIN();
