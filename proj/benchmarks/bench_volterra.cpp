#include <benchmark/benchmark.h>

#include <cmath>

#include "sphspec/volterra.hpp"

using namespace sphspec;

static void BM_SolvePhiCoulomb(benchmark::State& state) {
  const AngularMomentum am(0.0);
  const auto p = PotentialSpec::coulomb(1.0);
  const double z = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_phi_full(am, p, z).at_one());
}
BENCHMARK(BM_SolvePhiCoulomb)->Arg(-10000)->Arg(100)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_SolvePsiInfinity(benchmark::State& state) {
  const AngularMomentum am(1.0);
  const auto p = PotentialSpec::coulomb(-2.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_psi_beta(am, p, INFINITY, 500.0).at(0.5));
}
BENCHMARK(BM_SolvePsiInfinity)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
