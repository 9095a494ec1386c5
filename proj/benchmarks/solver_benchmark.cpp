#include <benchmark/benchmark.h>

#include "meval/levenshtein.hpp"
#include "meval/matchers.hpp"
#include "meval/oracle.hpp"
#include "meval/scenario.hpp"

namespace meval {
namespace {

// To run: ./build/benchmarks/meval_benchmarks --benchmark_filter=Orc

GeneratedSession css_session(std::size_t speakers, std::size_t utterances) {
  BenchScenario s;
  s.num_speakers = speakers;
  s.num_channels = 2;
  s.num_utterances = utterances;
  s.words_per_utterance = 10;
  s.corruption = 0.1;
  return generate_scenario(s);
}

void BM_Levenshtein(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Symbols a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<Symbol>(i % 7);
    b[i] = static_cast<Symbol>((i * 3) % 7);
  }
  for (auto _ : state) benchmark::DoNotOptimize(distance(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Levenshtein)->RangeMultiplier(2)->Range(64, 2048)->Complexity();

void BM_OrcDp(benchmark::State& state) {
  const auto session = css_session(4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(orc_distance(session.refs, session.hyps).cost);
}
BENCHMARK(BM_OrcDp)->DenseRange(10, 80, 10)->Unit(benchmark::kMillisecond);

void BM_OrcBruteForce(benchmark::State& state) {
  const auto session = css_session(4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_force_orc(session.refs, session.hyps).cost);
}
BENCHMARK(BM_OrcBruteForce)->DenseRange(4, 14, 2)->Unit(benchmark::kMillisecond);

void BM_Mimo(benchmark::State& state) {
  const auto session = css_session(4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mimo_distance(session.refs, session.hyps).cost);
}
BENCHMARK(BM_Mimo)->DenseRange(5, 20, 5)->Unit(benchmark::kMillisecond);

void BM_MimoSpeakers(benchmark::State& state) {
  const auto session = css_session(static_cast<std::size_t>(state.range(0)), 25);
  for (auto _ : state) benchmark::DoNotOptimize(mimo_distance(session.refs, session.hyps).cost);
}
BENCHMARK(BM_MimoSpeakers)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_CpWer(benchmark::State& state) {
  const auto session = css_session(4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cp_wer(session.refs, session.hyps).counts);
}
BENCHMARK(BM_CpWer)->DenseRange(20, 80, 20)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace meval
BENCHMARK_MAIN();
