#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "pathrules/error.hpp"
#include "pathrules/rnn.hpp"
#include "pathrules/targets.hpp"

using namespace pathrules;

namespace {

// Straightforward re-derivation of the forward pass from the parameter
// layout, used as an independent reference.
struct ReferenceNet {
  const RnnModel& model;

  std::vector<double> affine(std::size_t rows, std::size_t offset_w, std::size_t offset_u, std::size_t offset_b,
                             std::size_t row0, const std::vector<double>& x, const std::vector<double>& h) const {
    const auto p = model.parameters();
    const std::size_t n = model.hidden_size();
    const std::size_t l = x.size();
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = p[offset_b + row0 + r];
      for (std::size_t c = 0; c < l; ++c) acc += p[offset_w + (row0 + r) * l + c] * x[c];
      for (std::size_t c = 0; c < n; ++c) acc += p[offset_u + (row0 + r) * n + c] * h[c];
      out[r] = acc;
    }
    return out;
  }

  static double sig(double v) { return 1.0 / (1.0 + std::exp(-v)); }

  double probability(const std::string& word) const {
    const std::size_t n = model.hidden_size();
    const std::size_t l = model.alphabet().size();
    const std::size_t g = model.gate_count();
    const std::size_t ow = 0;
    const std::size_t ou = g * n * l;
    const std::size_t ob = ou + g * n * n;
    const std::size_t ov = ob + g * n;
    const std::size_t oc = ov + n;
    std::vector<double> h(n, 0.0);
    std::vector<double> c(n, 0.0);
    for (char ch : word) {
      const auto x = encode_one_hot(ch, model.alphabet());
      if (g == 3) {
        const auto zl = affine(n, ow, ou, ob, 0, x, h);
        const auto rl = affine(n, ow, ou, ob, n, x, h);
        std::vector<double> rh(n);
        for (std::size_t j = 0; j < n; ++j) rh[j] = sig(rl[j]) * h[j];
        const auto nl = affine(n, ow, ou, ob, 2 * n, x, rh);
        for (std::size_t j = 0; j < n; ++j) {
          const double z = sig(zl[j]);
          h[j] = (1 - z) * std::tanh(nl[j]) + z * h[j];
        }
      } else {
        const auto il = affine(n, ow, ou, ob, 0, x, h);
        const auto fl = affine(n, ow, ou, ob, n, x, h);
        const auto gl = affine(n, ow, ou, ob, 2 * n, x, h);
        const auto ol = affine(n, ow, ou, ob, 3 * n, x, h);
        for (std::size_t j = 0; j < n; ++j) {
          c[j] = sig(fl[j]) * c[j] + sig(il[j]) * std::tanh(gl[j]);
          h[j] = sig(ol[j]) * std::tanh(c[j]);
        }
      }
    }
    const auto p = model.parameters();
    double logit = p[oc];
    for (std::size_t j = 0; j < n; ++j) logit += p[ov + j] * h[j];
    return sig(logit);
  }
};

double reference_loss(const RnnModel& model, const std::vector<LabeledString>& examples) {
  ReferenceNet net{model};
  double sum = 0;
  for (const auto& e : examples) {
    const double p = net.probability(e.word);
    sum -= e.label ? std::log(p) : std::log(1 - p);
  }
  return sum / static_cast<double>(examples.size());
}

ModelConfig config(CellKind cell, std::size_t hidden = 4, std::uint64_t seed = 1) {
  ModelConfig cfg;
  cfg.cell = cell;
  cfg.hidden_size = hidden;
  cfg.seed = seed;
  return cfg;
}

Dataset sample(std::size_t count, std::uint64_t seed, std::size_t max_len = 12) {
  SamplerConfig cfg;
  cfg.count = count;
  cfg.seed = seed;
  cfg.max_len = max_len;
  return sample_strings(security_target(), cfg);
}

}  // namespace

TEST_CASE("one-hot encoding") {
  const Alphabet a("tps");
  CHECK(encode_one_hot('t', a) == std::vector<double>{1, 0, 0});
  CHECK(encode_one_hot('s', a) == std::vector<double>{0, 0, 1});
  CHECK_THROWS_AS(encode_one_hot('x', a), UnknownSymbol);
}

TEST_CASE("zero parameters score one half") {
  for (auto cell : {CellKind::Gru, CellKind::Lstm}) {
    const RnnModel m = RnnModel::zeros(config(cell), Alphabet("tps"));
    CHECK(m.probability("t") == 0.5);
    CHECK(m.probability("pts") == 0.5);
    const auto [p, rec] = forward(m, "tps");
    CHECK(p == 0.5);
    CHECK_FALSE(rec.prediction);
    CHECK(rec.steps.size() == 3);
    CHECK(rec.initial_hidden == std::vector<double>(4, 0.0));
  }
}

TEST_CASE("parameter layout sizes") {
  CHECK(RnnModel::parameter_count_for(config(CellKind::Gru)) == 3 * 4 * 3 + 3 * 4 * 4 + 3 * 4 + 4 + 1);
  CHECK(RnnModel::parameter_count_for(config(CellKind::Lstm)) == 4 * 4 * 3 + 4 * 4 * 4 + 4 * 4 + 4 + 1);
  CHECK_THROWS_AS(RnnModel::from_parameters(config(CellKind::Gru), Alphabet("tps"), std::vector<double>(3)),
                  InvalidArgument);
}

TEST_CASE("forward pass matches a reference implementation") {
  for (auto cell : {CellKind::Gru, CellKind::Lstm}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const RnnModel m = RnnModel::initialized(config(cell, 5, seed), Alphabet("tps"));
      ReferenceNet ref{m};
      Rng rng(seed);
      for (int i = 0; i < 30; ++i) {
        const std::string w = oracle::random_word(rng, "tps", 1, 15);
        CHECK(m.probability(w) == doctest::Approx(ref.probability(w)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("inference is a pure function") {
  const RnnModel m = RnnModel::initialized(config(CellKind::Lstm), Alphabet("tps"));
  const auto a = m.trace("ttpst");
  const auto b = m.trace("ttpst");
  CHECK(a.probability == b.probability);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t t = 0; t < a.steps.size(); ++t) {
    CHECK(a.steps[t].hidden == b.steps[t].hidden);
    CHECK(a.steps[t].output == b.steps[t].output);
  }
  CHECK(a.steps.back().output == a.probability);
  CHECK_THROWS_AS(m.probability(""), InvalidArgument);
  CHECK_THROWS_AS(m.probability("tx"), UnknownSymbol);
}

TEST_CASE("gates keep hidden values in range") {
  for (auto cell : {CellKind::Gru, CellKind::Lstm}) {
    std::vector<double> big(RnnModel::parameter_count_for(config(cell)));
    Rng rng(4);
    for (auto& v : big) v = rng.uniform(-20, 20);
    const RnnModel m = RnnModel::from_parameters(config(cell), Alphabet("tps"), big);
    for (const auto& step : m.trace("ttppsstpspst").steps) {
      for (double v : step.hidden) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
      }
      CHECK(step.output >= 0.0);
      CHECK(step.output <= 1.0);
    }
  }
}

TEST_CASE("analytic gradients agree with finite differences") {
  for (auto cell : {CellKind::Gru, CellKind::Lstm}) {
    CAPTURE(to_string(cell));
    const RnnModel m = RnnModel::initialized(config(cell, 4, 7), Alphabet("tps"));
    Rng rng(8);
    for (int i = 0; i < 5; ++i) {
      const LabeledString e{oracle::random_word(rng, "tps", 1, 10), rng.below(2) == 1};
      CHECK(gradient_check(m, e) < 1e-4);
    }
    const LabeledString single{"p", true};
    CHECK(gradient_check(m, single) < 1e-6);

    // Independent check: central differences of the reference loss.
    const std::vector<LabeledString> batch{{"tps", true}, {"stt", false}, {"ptpt", true}};
    std::vector<double> grad;
    const double loss = m.loss_and_gradient(batch, grad);
    CHECK(loss == doctest::Approx(reference_loss(m, batch)).epsilon(1e-12));
    std::vector<double> params(m.parameters().begin(), m.parameters().end());
    double worst = 0;
    for (std::size_t k = 0; k < params.size(); ++k) {
      auto plus = params;
      auto minus = params;
      plus[k] += 1e-5;
      minus[k] -= 1e-5;
      const double numeric =
          (reference_loss(RnnModel::from_parameters(m.config(), m.alphabet(), plus), batch) -
           reference_loss(RnnModel::from_parameters(m.config(), m.alphabet(), minus), batch)) /
          2e-5;
      worst = std::max(worst, std::abs(numeric - grad[k]) / std::max({std::abs(numeric), std::abs(grad[k]), 1e-7}));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("training memorizes a handful of examples") {
  const std::vector<LabeledString> ten{{"t", true},    {"s", false},  {"p", true},   {"tps", true},
                                       {"stt", false}, {"ts", false}, {"pts", true}, {"tts", false},
                                       {"ttp", true},  {"sps", false}};
  Dataset d{Alphabet("tps"), ten, 0};
  for (auto cell : {CellKind::Gru, CellKind::Lstm}) {
    auto cfg = config(cell, 4, 2);
    cfg.epochs = 3000;
    RnnModel m = RnnModel::initialized(cfg, d.alphabet);
    const TrainReport r = train(m, d, d);
    CHECK(r.epochs_run == 3000);
    CHECK(r.loss.back() < 1e-3);
    CHECK(evaluate(m, d) == 0.0);
  }
}

TEST_CASE("training is deterministic and zero epochs leave the model alone") {
  const Dataset d = sample(60, 3);
  auto cfg = config(CellKind::Gru, 4, 5);
  cfg.epochs = 50;
  cfg.dropout = 0.05;
  RnnModel a = RnnModel::initialized(cfg, d.alphabet);
  RnnModel b = RnnModel::initialized(cfg, d.alphabet);
  const auto ra = train(a, d, d);
  const auto rb = train(b, d, d);
  CHECK(a == b);
  CHECK(ra.checksum == rb.checksum);
  CHECK(ra.loss == rb.loss);

  cfg.epochs = 0;
  RnnModel c = RnnModel::initialized(cfg, d.alphabet);
  const auto before = c.checksum();
  const auto rc = train(c, d, d);
  CHECK(rc.epochs_run == 0);
  CHECK(c.checksum() == before);
}

TEST_CASE("checkpoints fire at the requested epochs") {
  const Dataset d = sample(40, 5);
  auto cfg = config(CellKind::Lstm);
  cfg.epochs = 30;
  RnnModel m = RnnModel::initialized(cfg, d.alphabet);
  std::vector<std::size_t> seen;
  TrainOptions opts;
  opts.eval_every = 10;
  opts.checkpoints = {5, 20, 30};
  opts.on_checkpoint = [&](std::size_t epoch, const RnnModel&, double) { seen.push_back(epoch); };
  const auto r = train(m, d, d, opts);
  CHECK(seen == std::vector<std::size_t>{5, 20, 30});
  CHECK(r.loss.size() == 30);
  CHECK(r.test_error.size() >= 3);
}

TEST_CASE("a passed deadline stops training") {
  const Dataset d = sample(40, 5);
  auto cfg = config(CellKind::Gru);
  cfg.epochs = 5000;
  RnnModel m = RnnModel::initialized(cfg, d.alphabet);
  TrainOptions opts;
  opts.deadline = std::chrono::steady_clock::now();
  const auto r = train(m, d, d, opts);
  CHECK(r.timed_out);
  CHECK(r.epochs_run < 5000);
}

TEST_CASE("evaluation and traces") {
  const Dataset d = sample(30, 8);
  const RnnModel m = RnnModel::initialized(config(CellKind::Gru), d.alphabet);
  const auto traces = record_traces(m, d);
  REQUIRE(traces.size() == 30);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    CHECK(traces[i].steps.size() == d.examples[i].word.size());
    CHECK(traces[i].prediction == (m.probability(d.examples[i].word) > 0.5));
    if (traces[i].prediction != d.examples[i].label) ++wrong;
  }
  CHECK(evaluate(m, d) == doctest::Approx(static_cast<double>(wrong) / 30.0));
  CHECK(evaluate(m, Dataset{d.alphabet, {}, 0}) == 0.0);
}

TEST_CASE("model configuration limits") {
  auto cfg = config(CellKind::Gru);
  cfg.hidden_size = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = config(CellKind::Gru);
  cfg.dropout = 0.2;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = config(CellKind::Gru);
  cfg.epochs = 5001;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = config(CellKind::Gru);
  cfg.learning_rate = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  CHECK(parse_cell_kind("LSTM") == CellKind::Lstm);
  CHECK(parse_cell_kind("gru") == CellKind::Gru);
  CHECK_THROWS_AS(parse_cell_kind("rnn"), InvalidArgument);
}

TEST_CASE("model file round trip is bit exact") {
  for (auto cell : {CellKind::Gru, CellKind::Lstm}) {
    auto cfg = config(cell, 6, 9);
    cfg.dropout = 0.01;
    const RnnModel m = RnnModel::initialized(cfg, Alphabet("tps"));
    const RnnModel back = read_model(write_model(m));
    CHECK(back == m);
    CHECK(back.checksum() == m.checksum());
  }
  CHECK_THROWS_AS(read_model("rnn v2\n"), ParseError);
}
