#include <benchmark/benchmark.h>

#include "zipfdark/corpus_experiment.hpp"
#include "zipfdark/persistence.hpp"
#include "zipfdark/simon_model.hpp"

namespace zipfdark {
namespace {

const std::string& novel() {
  static const std::string text = read_file(ZIPFDARK_BENCH_DATA);
  return text;
}

void BM_Tokenize(benchmark::State& state) {
  const auto config = TokenizerConfig::english_default();
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(novel(), config));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * novel().size()));
}
BENCHMARK(BM_Tokenize)->Unit(benchmark::kMillisecond);

void BM_BuildDistributions(benchmark::State& state) {
  const auto tokens = tokenize(novel(), TokenizerConfig::english_default());
  for (auto _ : state) {
    auto integrated = build_dist(tokens, DistMode::Integrated);
    auto word_only = build_dist(tokens, DistMode::WordOnly);
    benchmark::DoNotOptimize(rank_map(integrated, word_only));
  }
}
BENCHMARK(BM_BuildDistributions)->Unit(benchmark::kMillisecond);

void BM_CutoffSweep(benchmark::State& state) {
  const auto y = zm_quotients(static_cast<std::size_t>(state.range(0)), 2.75);
  const auto cutoffs = log_spaced_cutoffs(2, y.size());
  for (auto _ : state) benchmark::DoNotOptimize(fit_at_cutoffs(y, cutoffs));
}
BENCHMARK(BM_CutoffSweep)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_SimonSimulate(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        simulate(SimonConfig(0.05, static_cast<std::uint64_t>(state.range(0)), ++seed)));
}
BENCHMARK(BM_SimonSimulate)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace zipfdark

BENCHMARK_MAIN();
