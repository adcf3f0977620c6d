#include <benchmark/benchmark.h>

#include "sphspec/basis.hpp"
#include "sphspec/specfun.hpp"

using namespace sphspec;

static void BM_BesselPair(benchmark::State& state) {
  const BesselOrder o(1.5);
  const double w = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bessel_pair(o, w));
}
BENCHMARK(BM_BesselPair)->Arg(1)->Arg(20)->Arg(1000);

static void BM_BesselZero(benchmark::State& state) {
  const BesselOrder o(3.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bessel_zero(o, n));
}
BENCHMARK(BM_BesselZero)->Arg(1)->Arg(200);

static void BM_BasisEval(benchmark::State& state) {
  const AngularMomentum am(-0.5);
  const double z = state.range(0) > 0 ? 1e4 : -1e4;
  for (auto _ : state) benchmark::DoNotOptimize(basis_eval(am, z, 0.3));
}
BENCHMARK(BM_BasisEval)->Arg(1)->Arg(-1);

BENCHMARK_MAIN();
