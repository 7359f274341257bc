#include <benchmark/benchmark.h>

#include "dapkit/dap_model.hpp"

using namespace dapkit;

static void BM_JCorrection(benchmark::State& state) {
  const double r = 0.5 * state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(j_correction(r, 4.63, 3.90, 9.72));
  }
}
BENCHMARK(BM_JCorrection)->Arg(2)->Arg(10)->Arg(40);

static void BM_TwoCenterSeriesBranch(benchmark::State& state) {
  // radii within 1%: exercises the series path
  for (auto _ : state) {
    benchmark::DoNotOptimize(hydrogenic_two_center_term(5.0, 2.0, 2.001));
  }
}
BENCHMARK(BM_TwoCenterSeriesBranch);
