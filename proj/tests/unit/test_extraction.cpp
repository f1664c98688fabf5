#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "pathrules/extraction.hpp"
#include "pathrules/fsa_io.hpp"
#include "pathrules/regex.hpp"
#include "pathrules/ssm.hpp"
#include "pathrules/targets.hpp"

using namespace pathrules;

namespace {

std::vector<std::string> random_words(Rng& rng, std::string_view symbols, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(oracle::random_word(rng, symbols, 1, 10));
  return out;
}

std::uint64_t total_count(const Ssm& s) {
  std::uint64_t sum = 0;
  for (std::size_t q = 0; q < s.state_count(); ++q) {
    for (std::size_t a = 0; a < s.input_count(); ++a) sum += s.cell_total(q, static_cast<SymbolIndex>(a));
  }
  return sum;
}

}  // namespace

TEST_CASE("quantizer routing") {
  QuantizerTree q(2);
  CHECK(q.state_count() == 1);
  CHECK(q.quantize(std::vector<double>{5, -3}) == 0);
  q.split_by_centroids(0, {{0, 0}, {1, 1}}, {0, 1});
  CHECK(q.state_count() == 2);
  CHECK(q.quantize(std::vector<double>{0.1, 0.2}) == 0);
  CHECK(q.quantize(std::vector<double>{0.9, 0.7}) == 1);
  CHECK(q.quantize(std::vector<double>{0.5, 0.5}) == 0);  // tie goes to the first centroid
  q.split_by_axis(1, 0, 2.0, 1, 2);
  CHECK(q.state_count() == 3);
  CHECK(q.quantize(std::vector<double>{1.5, 1.5}) == 1);
  CHECK(q.quantize(std::vector<double>{3.0, 3.0}) == 2);
  CHECK(q.leaf_count() == 3);
  q.relabel({0, 1, 0}, 2);
  CHECK(q.state_count() == 2);
  CHECK(q.quantize(std::vector<double>{3.0, 3.0}) == 0);
}

TEST_CASE("splitting separates synthetic clusters") {
  Rng rng(2);
  std::vector<KeyedPoint> points;
  const std::vector<std::vector<double>> centers{{0, 0, 0}, {1, 0, 0}, {0, 1, 1}};
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (int i = 0; i < 20; ++i) {
      auto p = centers[c];
      for (auto& v : p) v += rng.uniform(-0.05, 0.05);
      points.push_back({p, -1, c == 1, c});
    }
  }
  const QuantizerTree split = split_quantizer(QuantizerTree(3), 0, points);
  CHECK(split.state_count() == 3);
  std::vector<std::set<std::size_t>> states(3);
  for (const auto& p : points) states[p.next].insert(split.quantize(p.point));
  std::set<std::size_t> all;
  for (const auto& s : states) {
    CHECK(s.size() == 1);
    all.insert(*s.begin());
  }
  CHECK(all.size() == 3);
}

TEST_CASE("identical points cannot be split") {
  const std::vector<KeyedPoint> same{{{0.5, 0.5}, -1, true, 0}, {{0.5, 0.5}, -1, false, 1}};
  CHECK_THROWS_AS(split_quantizer(QuantizerTree(2), 0, same), Unsplittable);
  CHECK_THROWS_AS(split_quantizer_axis(QuantizerTree(2), 0, same), Unsplittable);
  const std::vector<KeyedPoint> one_group{{{0.1, 0.5}, -1, true, 0}, {{0.9, 0.5}, -1, true, 0}};
  CHECK_THROWS_AS(split_quantizer(QuantizerTree(2), 0, one_group), Unsplittable);
  const QuantizerTree axis = split_quantizer_axis(QuantizerTree(2), 0, one_group);
  CHECK(axis.state_count() == 2);
}

TEST_CASE("one-hot traces of a two-state machine") {
  // Parity of a's over {a, b}.
  const Fsa parity(Alphabet("ab"), 2, 0, {true, false}, {1, 0, 0, 1});
  const auto traces = oracle::one_hot_traces(parity, {"a", "b", "ab", "ba", "aa", "bab"});
  const TraceSet set = TraceSet::from_traces(traces, parity.alphabet());
  QuantizerTree q(2);
  q.split_by_centroids(0, {{1, 0}, {0, 1}}, {0, 1});
  const Ssm ssm = build_ssm(set, q);
  CHECK(ssm.deterministic());
  CHECK(ssm.state_count() == 2);
  ExtractedMachine m{parity.alphabet(), ssm, q, 0, true, 0, 0, {}};
  CHECK(isomorphic(to_fsa(m), parity));
}

TEST_CASE("duplicated traces double the counts") {
  const Fsa target = security_target();
  const auto once = oracle::one_hot_traces(target, {"tps"});
  const auto twice = oracle::one_hot_traces(target, {"tps", "tps"});
  QuantizerTree q(3);
  const Ssm a = build_ssm(once, q, target.alphabet());
  const Ssm b = build_ssm(twice, q, target.alphabet());
  for (SymbolIndex s = 0; s < 3; ++s) CHECK(b.cell_total(0, s) == 2 * a.cell_total(0, s));
  CHECK_THROWS_AS(build_ssm(std::vector<TraceRecord>{}, q, target.alphabet()), InvalidArgument);
}

TEST_CASE("entropy and split-state selection") {
  Ssm s(3, 2);
  s.add(0, 0, {0, true}, 1);
  s.add(0, 0, {1, true}, 1);  // 1 bit
  s.add(1, 0, {0, true}, 1);
  s.add(1, 1, {2, false}, 3);
  s.add(1, 1, {0, false}, 1);  // 0.811 bits
  s.add(2, 1, {2, true}, 1);
  s.add(2, 1, {1, false}, 1);  // 1 bit
  CHECK(s.cell_entropy(0, 0) == doctest::Approx(1.0));
  CHECK(s.cell_entropy(1, 1) == doctest::Approx(0.811278).epsilon(1e-5));
  CHECK(s.cell_entropy(0, 1) == 0.0);
  CHECK_FALSE(s.deterministic());
  CHECK(select_split_state(s) == 0);  // 0 and 2 tie at one bit

  Ssm clean(2, 1);
  clean.add(0, 0, {1, true});
  clean.add(1, 0, {0, false});
  CHECK(clean.deterministic());
  CHECK_THROWS_AS(select_split_state(clean), InvalidArgument);

  Ssm landing(1, 1);
  landing.add_landing(0, true);
  landing.add_landing(0, false);
  CHECK(landing.landing_entropy(0) == doctest::Approx(1.0));
  CHECK_FALSE(landing.deterministic());
}

TEST_CASE("merging equivalent states") {
  // States 1 and 2 behave alike; 0 differs by output.
  Ssm s(3, 1);
  s.add(0, 0, {1, false});
  s.add(1, 0, {2, true});
  s.add(2, 0, {1, true});
  const MergeResult r = merge_equivalent(s);
  CHECK(r.ssm.state_count() == 2);
  CHECK(r.mapping == std::vector<std::size_t>{0, 1, 1});
  CHECK(total_count(r.ssm) == total_count(s));
  const MergeResult again = merge_equivalent(r.ssm);
  CHECK(again.ssm == r.ssm);
  CHECK(again.mapping == std::vector<std::size_t>{0, 1});
}

TEST_CASE("merging keeps replayed behaviour on one-hot traces") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Fsa f = oracle::random_dfa(rng, 2 + rng.below(3), 2);
    const auto words = random_words(rng, "ab", 60);
    const TraceSet set = TraceSet::from_traces(oracle::one_hot_traces(f, words), f.alphabet());
    QuantizerTree q(f.state_count());
    std::vector<std::vector<double>> centroids;
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < f.state_count(); ++i) {
      std::vector<double> c(f.state_count(), 0.0);
      c[i] = 1.0;
      centroids.push_back(c);
      ids.push_back(i);
    }
    q.split_by_centroids(0, centroids, ids);
    const Ssm ssm = build_ssm(set, q);
    const MergeResult r = merge_equivalent(ssm);
    CHECK(r.ssm.deterministic());
    CHECK(total_count(r.ssm) == total_count(ssm));
    for (const auto& step : set.steps) {
      const auto from = r.mapping[q.quantize(set.points[step.from])];
      const auto to = r.mapping[q.quantize(set.points[step.to])];
      CHECK(r.ssm.probability(from, step.input, {to, step.output}) == 1.0);
    }
  }
}

TEST_CASE("extraction recovers random machines from one-hot traces") {
  Rng rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng.below(4);
    const std::size_t k = 2 + rng.below(2);
    const Fsa f = oracle::random_dfa(rng, n, k);
    const auto words = random_words(rng, std::string("abc").substr(0, k), 200);
    const ExtractedMachine m = extract(oracle::one_hot_traces(f, words), f.alphabet());
    CAPTURE(write_fsa(f));
    CHECK(m.deterministic);
    CHECK(isomorphic(to_fsa(m), f));
    for (std::size_t i = 1; i < m.entropy_history.size(); ++i) CHECK(m.entropy_history[i] >= 0.0);
  }
}

TEST_CASE("extraction recovers the security target") {
  const Fsa target = security_target();
  Rng rng(1);
  const auto words = random_words(rng, "tps", 300);
  const ExtractedMachine m = extract(oracle::one_hot_traces(target, words), target.alphabet());
  CHECK(m.deterministic);
  CHECK(m.initial_state == 0);
  CHECK(isomorphic(to_fsa(m), minimize(target)));
  const std::string meta = write_extraction_metadata(m);
  CHECK(meta.find("deterministic: true") != std::string::npos);
}

TEST_CASE("iteration budget of one leaves a conflicting machine nondeterministic") {
  const Fsa target = security_target();
  Rng rng(3);
  ExtractionConfig cfg;
  cfg.max_iterations = 1;
  const ExtractedMachine m = extract(oracle::one_hot_traces(target, random_words(rng, "tps", 100)),
                                     target.alphabet(), cfg);
  CHECK_FALSE(m.deterministic);
  CHECK(m.iterations == 1);
  CHECK_THROWS_AS(project(m, m.initial_state), InvalidArgument);
  const Projection forced = project(m, m.initial_state, true, false);
  CHECK(forced.lossy);
  CHECK_THROWS_AS(to_fsa(m), InvalidArgument);
}

TEST_CASE("initial state choice uses training accuracy") {
  const Fsa target = security_target();
  Rng rng(4);
  const ExtractedMachine m = extract(oracle::one_hot_traces(target, random_words(rng, "tps", 200)),
                                     target.alphabet());
  SamplerConfig cfg;
  cfg.count = 200;
  const Dataset train = sample_strings(target, cfg);
  const std::size_t start = choose_initial_state(m, train);
  const Projection p = project(m, start);
  CHECK_FALSE(p.lossy);
  CHECK(p.min_agreement == 1.0);
  for (const auto& e : train.examples) CHECK(p.fsa.accepts(e.word) == e.label);
}
