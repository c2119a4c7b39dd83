#include <benchmark/benchmark.h>

#include <cmath>

#include "sqham/copies.hpp"
#include "sqham/solver.hpp"
#include "sqham/spread_audit.hpp"

using namespace sqham;

static void BM_EnumerateCopies(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_copies(n).size());
}
BENCHMARK(BM_EnumerateCopies)->DenseRange(7, 10)->Unit(benchmark::kMillisecond);

// G(n, p) at p = 2.2 / sqrt(n), close to the empirical crossing.
static void BM_SolverNearThreshold(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double p = std::min(1.0, 2.2 / std::sqrt(static_cast<double>(n)));
  const SearchBudget budget{5'000'000, 10.0};
  std::uint64_t trial = 0;
  for (auto _ : state) {
    RngStream rng(1, trial++);
    const Graph g = sample_gnp(n, p, rng);
    benchmark::DoNotOptimize(find_power_ham(g, 2, budget, rng).status);
  }
}
BENCHMARK(BM_SolverNearThreshold)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ExtensionCount(benchmark::State& state) {
  const CopyCatalog cat = enumerate_copies(static_cast<int>(state.range(0)));
  const EdgeSet required(cat.n(), {{0, 1}, {1, 2}});
  for (auto _ : state) benchmark::DoNotOptimize(extension_count(cat, required));
}
BENCHMARK(BM_ExtensionCount)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);

static void BM_OverlapHistogram(benchmark::State& state) {
  const CopyCatalog cat = enumerate_copies(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(overlap_histogram(cat).total);
}
BENCHMARK(BM_OverlapHistogram)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
