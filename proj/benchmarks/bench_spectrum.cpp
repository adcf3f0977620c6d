#include <benchmark/benchmark.h>

#include "sphspec/oracle.hpp"
#include "sphspec/spectrum.hpp"

using namespace sphspec;

static void BM_CoulombEigenvalues(benchmark::State& state) {
  const AngularMomentum am(0.0);
  const auto p = PotentialSpec::coulomb(1.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(am, p, BoundaryCondition::dirichlet(), n));
}
BENCHMARK(BM_CoulombEigenvalues)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_FdOracle(benchmark::State& state) {
  const AngularMomentum am(0.0);
  const auto p = PotentialSpec::coulomb(1.0);
  FdConfig cfg;
  cfg.M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fd_eigenvalues(am, p, cfg, BoundaryCondition::dirichlet(), 10));
}
BENCHMARK(BM_FdOracle)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
