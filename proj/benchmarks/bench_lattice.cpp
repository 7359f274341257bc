#include <benchmark/benchmark.h>

#include "dapkit/lattice.hpp"

using namespace dapkit;

static void BM_EnumerateShells(benchmark::State& state) {
  const LatticeSpec lat{4.362, LatticeKind::Zincblende};
  const double r_max = state.range(0) * lat.a0;
  for (auto _ : state) {
    auto shells = enumerate_shells(lat, SublatticeRelation::Any, r_max);
    benchmark::DoNotOptimize(shells);
  }
}
BENCHMARK(BM_EnumerateShells)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

static void BM_PairOrientations(benchmark::State& state) {
  const LatticeSpec lat{4.362, LatticeKind::Zincblende};
  const auto shells =
      enumerate_shells(lat, SublatticeRelation::Same, 5.0 * lat.a0);
  const Shell& shell = shells[state.range(0)];
  for (auto _ : state) {
    auto geom = pair_orientations(lat, shell);
    benchmark::DoNotOptimize(geom);
  }
  state.counters["multiplicity"] = shell.multiplicity;
}
BENCHMARK(BM_PairOrientations)->Arg(0)->Arg(8)->Arg(15);
