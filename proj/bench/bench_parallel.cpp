// Serial versus parallel corpus runs and brute-force enumeration.

#include <benchmark/benchmark.h>

#include "cubeprover/corpus.hpp"

using namespace cube;

namespace {

const std::vector<Formula>& goals() {
  static const auto g = random_corpus(100, 2024);
  return g;
}

void BM_Corpus(benchmark::State& state) {
  Exec exec = state.range(0) ? Exec::Parallel : Exec::Serial;
  auto logics = cube_logics();
  for (auto _ : state) benchmark::DoNotOptimize(run_corpus(goals(), logics, exec));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * goals().size() * logics.size()));
}
BENCHMARK(BM_Corpus)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

// Valid formulas force a full enumeration of all frames and valuations.
void BM_BruteForce(benchmark::State& state) {
  Exec exec = state.range(0) ? Exec::Parallel : Exec::Serial;
  Formula f = parse("[](p -> q) -> ([]p -> []q)");
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_countermodel(f, 0, 3, exec));
}
BENCHMARK(BM_BruteForce)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_BruteForceRefuted(benchmark::State& state) {
  Exec exec = state.range(0) ? Exec::Parallel : Exec::Serial;
  Formula f = parse("<>[]p -> []<>(p & q)");
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_countermodel(f, AX_T, 3, exec));
}
BENCHMARK(BM_BruteForceRefuted)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
