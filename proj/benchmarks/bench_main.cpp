#include <benchmark/benchmark.h>

#include "lightspan/charging_forest.hpp"
#include "lightspan/generators.hpp"
#include "lightspan/pathdec.hpp"
#include "lightspan/spanner.hpp"

using namespace lightspan;

static void BM_GreedySpannerGnp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  WeightedGraph g = generate_gnp(n, 0.3, 42);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_spanner(g, Rational(1, 2)));
  state.counters["edges"] = static_cast<double>(g.edge_count());
}
BENCHMARK(BM_GreedySpannerGnp)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_GreedySpannerKPath(benchmark::State& state) {
  KPathInstance inst = generate_kpath(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_spanner(inst.graph, Rational(1, 2)));
}
BENCHMARK(BM_GreedySpannerKPath)->Args({60, 2})->Args({60, 5})->Args({200, 3})->Unit(benchmark::kMillisecond);

static void BM_ChargingForest(benchmark::State& state) {
  KPathInstance inst = generate_kpath(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 11);
  const bool checks = state.range(2) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(run_charging_forest(inst.graph, inst.decomposition, Rational(1, 2), checks));
}
BENCHMARK(BM_ChargingForest)
    ->Args({30, 2, 0})
    ->Args({60, 3, 0})
    ->Args({60, 5, 0})
    ->Args({60, 3, 1})
    ->Unit(benchmark::kMillisecond);

static void BM_Normalize(benchmark::State& state) {
  KPathInstance inst = generate_kpath(static_cast<int>(state.range(0)), 3, 5);
  for (auto _ : state) benchmark::DoNotOptimize(normalize(inst.graph, inst.decomposition));
}
BENCHMARK(BM_Normalize)->Arg(30)->Arg(120)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
