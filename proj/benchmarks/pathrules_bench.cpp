#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "pathrules/dataset.hpp"
#include "pathrules/extraction.hpp"
#include "pathrules/nfa.hpp"
#include "pathrules/regex.hpp"
#include "pathrules/rnn.hpp"
#include "pathrules/simdist.hpp"
#include "pathrules/targets.hpp"

using namespace pathrules;

namespace {

Dataset sampled(std::size_t count, std::size_t max_len = 12) {
  SamplerConfig cfg;
  cfg.count = count;
  cfg.max_len = max_len;
  return sample_strings(security_target(), cfg);
}

RnnModel model(CellKind cell, std::size_t hidden) {
  ModelConfig cfg;
  cfg.cell = cell;
  cfg.hidden_size = hidden;
  return RnnModel::initialized(cfg, Alphabet("tps"));
}

}  // namespace

static void BM_EditDistance(benchmark::State& state) {
  const Fsa lang = regex_to_fsa("(t|p)*s(tp)*|p*", Alphabet("tps"));
  const std::string word(static_cast<std::size_t>(state.range(0)), 's');
  for (auto _ : state) benchmark::DoNotOptimize(edit_distance(word, lang));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EditDistance)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

static void BM_Dissimilarity(benchmark::State& state) {
  const Fsa tstar = regex_to_fsa("t*|tt*p(t|p)*", Alphabet("tps"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dissimilarity(tstar, security_target(), static_cast<std::size_t>(state.range(0)), 1));
  }
}
BENCHMARK(BM_Dissimilarity)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_Forward(benchmark::State& state) {
  const RnnModel m = model(state.range(0) == 0 ? CellKind::Gru : CellKind::Lstm, static_cast<std::size_t>(state.range(1)));
  const std::string word = "ttpstpsptstpps";
  for (auto _ : state) benchmark::DoNotOptimize(m.probability(word));
}
BENCHMARK(BM_Forward)->ArgsProduct({{0, 1}, {4, 16, 32}});

static void BM_TrainEpoch(benchmark::State& state) {
  const Dataset d = sampled(800);
  const Dataset empty{d.alphabet, {}, 0};
  RnnModel m = model(state.range(0) == 0 ? CellKind::Gru : CellKind::Lstm, 4);
  ModelConfig cfg = m.config();
  cfg.epochs = 1;
  TrainOptions opts;
  opts.eval_every = 0;
  for (auto _ : state) {
    RnnModel local = RnnModel::from_parameters(cfg, m.alphabet(), {m.parameters().begin(), m.parameters().end()});
    benchmark::DoNotOptimize(train(local, d, empty, opts));
  }
}
BENCHMARK(BM_TrainEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Extract(benchmark::State& state) {
  const Dataset d = sampled(static_cast<std::size_t>(state.range(0)));
  ModelConfig cfg;
  cfg.epochs = 300;
  RnnModel m = RnnModel::initialized(cfg, d.alphabet);
  train(m, d, d);
  const auto traces = record_traces(m, d);
  for (auto _ : state) benchmark::DoNotOptimize(extract(traces, d.alphabet));
}
BENCHMARK(BM_Extract)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_Determinize(benchmark::State& state) {
  // (a|b)*a(a|b)^k needs 2^(k+1) subsets.
  std::string pattern = "(a|b)*a";
  for (int i = 0; i < state.range(0); ++i) pattern += "(a|b)";
  const Nfa nfa = regex_to_nfa(pattern, Alphabet("ab"));
  for (auto _ : state) benchmark::DoNotOptimize(minimize(determinize(nfa)));
}
BENCHMARK(BM_Determinize)->DenseRange(2, 10, 4)->Unit(benchmark::kMicrosecond);

static void BM_Sample(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sampled(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Sample)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
