#include <benchmark/benchmark.h>

#include "dapkit/spectra.hpp"

using namespace dapkit;

static void BM_FcTable(benchmark::State& state) {
  const int n = state.range(0);
  for (auto _ : state) {
    auto table = fc_overlap_table(n, n, 0.033, 0.028, 0.9, 200);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_FcTable)->Arg(20)->Arg(60)->Arg(150);

static void BM_Lineshape(benchmark::State& state) {
  const double s = state.range(0);
  const double omega = 0.030;
  const auto model =
      VibronicModel::make(displacement_for_huang_rhys(s, omega), omega, omega, 2.10);
  for (auto _ : state) {
    auto spec = lineshape(model, 5.0, {}, {});
    benchmark::DoNotOptimize(spec);
  }
  state.counters["S"] = s;
}
BENCHMARK(BM_Lineshape)->Arg(1)->Arg(5)->Arg(20);
