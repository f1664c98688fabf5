#include "pathrules/rnn.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pathrules/fsa_io.hpp"
#include "pathrules/rng.hpp"
#include "pathrules/text.hpp"

namespace pathrules {
namespace {

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

struct Layout {
  std::size_t gates, n, l;
  std::size_t w, u, b, v, c, total;

  explicit Layout(const ModelConfig& cfg)
      : gates(cfg.cell == CellKind::Gru ? 3 : 4), n(cfg.hidden_size), l(cfg.input_size) {
    const std::size_t rows = gates * n;
    w = 0;
    u = w + rows * l;
    b = u + rows * n;
    v = b + rows;
    c = v + n;
    total = c + 1;
  }
};

// Activations of one word, kept for backpropagation.
struct Tape {
  std::size_t steps = 0;
  std::vector<SymbolIndex> symbols;
  std::vector<double> scale;  // value of the hot input entry (0 when dropped)
  std::vector<double> h;      // (T+1) x N, h[0] = 0
  std::vector<double> c;      // (T+1) x N, LSTM cell state
  std::vector<double> act;    // T x G*N activated gates
  std::vector<double> rh;     // T x N, GRU r * h_prev
  std::vector<double> tc;     // T x N, LSTM tanh(c)
  double logit = 0.0;

  void reset(const Layout& lay, std::size_t t) {
    steps = t;
    symbols.resize(t);
    scale.assign(t, 1.0);
    h.assign((t + 1) * lay.n, 0.0);
    act.resize(t * lay.gates * lay.n);
    if (lay.gates == 3) {
      rh.resize(t * lay.n);
    } else {
      c.assign((t + 1) * lay.n, 0.0);
      tc.resize(t * lay.n);
    }
  }
};

class Network {
 public:
  Network(const Layout& lay, const double* p) : lay_(lay), p_(p) {}

  void run(Tape& tape) const {
    for (std::size_t t = 0; t < tape.steps; ++t) step(tape, t);
    const std::size_t n = lay_.n;
    const double* h = &tape.h[tape.steps * n];
    double z = p_[lay_.c];
    for (std::size_t j = 0; j < n; ++j) z += p_[lay_.v + j] * h[j];
    tape.logit = z;
  }

  double output_at(const Tape& tape, std::size_t t) const {
    const double* h = &tape.h[(t + 1) * lay_.n];
    double z = p_[lay_.c];
    for (std::size_t j = 0; j < lay_.n; ++j) z += p_[lay_.v + j] * h[j];
    return sigmoid(z);
  }

  // Adds d(loss)/d(params) to grad given d(loss)/d(logit).
  void backward(const Tape& tape, double dlogit, double* grad) const {
    const std::size_t n = lay_.n;
    std::vector<double> dh(n), dh_prev(n), dc(n, 0.0), dc_prev(n), da(lay_.gates * n);
    const double* h_last = &tape.h[tape.steps * n];
    grad[lay_.c] += dlogit;
    for (std::size_t j = 0; j < n; ++j) {
      grad[lay_.v + j] += dlogit * h_last[j];
      dh[j] = dlogit * p_[lay_.v + j];
    }
    for (std::size_t t = tape.steps; t-- > 0;) {
      if (lay_.gates == 3) {
        gru_backward(tape, t, dh, dh_prev, da, grad);
      } else {
        lstm_backward(tape, t, dh, dc, dh_prev, dc_prev, da, grad);
        dc.swap(dc_prev);
      }
      dh.swap(dh_prev);
    }
  }

 private:
  double w(std::size_t row, std::size_t col) const { return p_[lay_.w + row * lay_.l + col]; }
  double u(std::size_t row, std::size_t col) const { return p_[lay_.u + row * lay_.n + col]; }
  double b(std::size_t row) const { return p_[lay_.b + row]; }

  void step(Tape& tape, std::size_t t) const {
    const std::size_t n = lay_.n;
    const SymbolIndex a = tape.symbols[t];
    const double s = tape.scale[t];
    const double* hp = &tape.h[t * n];
    double* hn = &tape.h[(t + 1) * n];
    double* act = &tape.act[t * lay_.gates * n];
    if (lay_.gates == 3) {
      double* rh = &tape.rh[t * n];
      for (std::size_t row = 0; row < 2 * n; ++row) {
        double x = s * w(row, a) + b(row);
        for (std::size_t k = 0; k < n; ++k) x += u(row, k) * hp[k];
        act[row] = sigmoid(x);
      }
      for (std::size_t k = 0; k < n; ++k) rh[k] = act[n + k] * hp[k];
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t row = 2 * n + j;
        double x = s * w(row, a) + b(row);
        for (std::size_t k = 0; k < n; ++k) x += u(row, k) * rh[k];
        act[row] = std::tanh(x);
        const double z = act[j];
        hn[j] = (1.0 - z) * act[row] + z * hp[j];
      }
    } else {
      const double* cp = &tape.c[t * n];
      double* cn = &tape.c[(t + 1) * n];
      double* tc = &tape.tc[t * n];
      for (std::size_t row = 0; row < 4 * n; ++row) {
        double x = s * w(row, a) + b(row);
        for (std::size_t k = 0; k < n; ++k) x += u(row, k) * hp[k];
        act[row] = (row >= 2 * n && row < 3 * n) ? std::tanh(x) : sigmoid(x);
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double i = act[j], f = act[n + j], g = act[2 * n + j], o = act[3 * n + j];
        cn[j] = f * cp[j] + i * g;
        tc[j] = std::tanh(cn[j]);
        hn[j] = o * tc[j];
      }
    }
  }

  void accumulate(const Tape& tape, std::size_t t, const std::vector<double>& da, const double* h_in,
                  std::size_t row_begin, std::size_t row_end, double* grad) const {
    const std::size_t n = lay_.n;
    const SymbolIndex a = tape.symbols[t];
    const double s = tape.scale[t];
    for (std::size_t row = row_begin; row < row_end; ++row) {
      const double d = da[row];
      grad[lay_.w + row * lay_.l + a] += d * s;
      grad[lay_.b + row] += d;
      double* gu = &grad[lay_.u + row * n];
      for (std::size_t k = 0; k < n; ++k) gu[k] += d * h_in[k];
    }
  }

  void gru_backward(const Tape& tape, std::size_t t, const std::vector<double>& dh, std::vector<double>& dh_prev,
                    std::vector<double>& da, double* grad) const {
    const std::size_t n = lay_.n;
    const double* hp = &tape.h[t * n];
    const double* act = &tape.act[t * 3 * n];
    const double* rh = &tape.rh[t * n];
    for (std::size_t j = 0; j < n; ++j) {
      const double z = act[j], cand = act[2 * n + j];
      dh_prev[j] = dh[j] * z;
      da[j] = dh[j] * (hp[j] - cand) * z * (1.0 - z);
      da[2 * n + j] = dh[j] * (1.0 - z) * (1.0 - cand * cand);
    }
    for (std::size_t k = 0; k < n; ++k) {
      double drh = 0.0;
      for (std::size_t j = 0; j < n; ++j) drh += u(2 * n + j, k) * da[2 * n + j];
      const double r = act[n + k];
      dh_prev[k] += drh * r;
      da[n + k] = drh * hp[k] * r * (1.0 - r);
    }
    accumulate(tape, t, da, hp, 0, 2 * n, grad);
    accumulate(tape, t, da, rh, 2 * n, 3 * n, grad);
    for (std::size_t k = 0; k < n; ++k) {
      double sum = 0.0;
      for (std::size_t row = 0; row < 2 * n; ++row) sum += u(row, k) * da[row];
      dh_prev[k] += sum;
    }
  }

  void lstm_backward(const Tape& tape, std::size_t t, const std::vector<double>& dh, const std::vector<double>& dc_in,
                     std::vector<double>& dh_prev, std::vector<double>& dc_prev, std::vector<double>& da,
                     double* grad) const {
    const std::size_t n = lay_.n;
    const double* hp = &tape.h[t * n];
    const double* cp = &tape.c[t * n];
    const double* act = &tape.act[t * 4 * n];
    const double* tc = &tape.tc[t * n];
    for (std::size_t j = 0; j < n; ++j) {
      const double i = act[j], f = act[n + j], g = act[2 * n + j], o = act[3 * n + j];
      const double dc = dc_in[j] + dh[j] * o * (1.0 - tc[j] * tc[j]);
      da[j] = dc * g * i * (1.0 - i);
      da[n + j] = dc * cp[j] * f * (1.0 - f);
      da[2 * n + j] = dc * i * (1.0 - g * g);
      da[3 * n + j] = dh[j] * tc[j] * o * (1.0 - o);
      dc_prev[j] = dc * f;
    }
    accumulate(tape, t, da, hp, 0, 4 * n, grad);
    for (std::size_t k = 0; k < n; ++k) {
      double sum = 0.0;
      for (std::size_t row = 0; row < 4 * n; ++row) sum += u(row, k) * da[row];
      dh_prev[k] = sum;
    }
  }

  const Layout& lay_;
  const double* p_;
};

void load_word(Tape& tape, const Layout& lay, const Alphabet& alphabet, std::string_view word) {
  if (word.empty()) throw InvalidArgument("rnn: empty word");
  tape.reset(lay, word.size());
  for (std::size_t t = 0; t < word.size(); ++t) tape.symbols[t] = alphabet.index(word[t]);
}

// Loss (BCE from logits) for one labeled example.
double bce(double logit, bool label) { return softplus(logit) - (label ? logit : 0.0); }

}  // namespace

std::string_view to_string(CellKind kind) { return kind == CellKind::Gru ? "gru" : "lstm"; }

CellKind parse_cell_kind(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "gru") return CellKind::Gru;
  if (lower == "lstm") return CellKind::Lstm;
  throw InvalidArgument("unknown cell kind '" + std::string(text) + "' (expected gru or lstm)");
}

void ModelConfig::validate() const {
  if (hidden_size < 1 || hidden_size > 256) throw InvalidArgument("model: hidden size must lie in [1, 256]");
  if (input_size < 1) throw InvalidArgument("model: input size must be >= 1");
  if (!(dropout >= 0.0 && dropout <= 0.10)) throw InvalidArgument("model: dropout must lie in [0, 0.10]");
  if (epochs > 5000) throw InvalidArgument("model: at most 5000 epochs");
  if (!(learning_rate > 0.0)) throw InvalidArgument("model: learning rate must be positive");
}

std::vector<double> encode_one_hot(char symbol, const Alphabet& alphabet) {
  std::vector<double> x(alphabet.size(), 0.0);
  x[alphabet.index(symbol)] = 1.0;
  return x;
}

RnnModel::RnnModel(ModelConfig config, Alphabet alphabet)
    : config_(std::move(config)), alphabet_(std::move(alphabet)) {
  config_.validate();
  if (config_.input_size != alphabet_.size()) throw InvalidArgument("model: input size must equal alphabet size");
  params_.assign(Layout(config_).total, 0.0);
}

std::size_t RnnModel::parameter_count_for(const ModelConfig& config) { return Layout(config).total; }

RnnModel RnnModel::zeros(const ModelConfig& config, const Alphabet& alphabet) { return RnnModel(config, alphabet); }

RnnModel RnnModel::initialized(const ModelConfig& config, const Alphabet& alphabet) {
  RnnModel m(config, alphabet);
  Rng rng(derive_seed(config.seed, "rnn-init"));
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden_size));
  for (auto& p : m.params_) p = rng.uniform(-bound, bound);
  return m;
}

RnnModel RnnModel::from_parameters(const ModelConfig& config, const Alphabet& alphabet,
                                   std::vector<double> parameters) {
  RnnModel m(config, alphabet);
  if (parameters.size() != m.params_.size()) {
    throw InvalidArgument("model: expected " + std::to_string(m.params_.size()) + " parameters, got " +
                          std::to_string(parameters.size()));
  }
  m.params_ = std::move(parameters);
  return m;
}

double RnnModel::probability(std::string_view word) const {
  const Layout lay(config_);
  Tape tape;
  load_word(tape, lay, alphabet_, word);
  Network(lay, params_.data()).run(tape);
  return sigmoid(tape.logit);
}

TraceRecord RnnModel::trace(std::string_view word) const {
  const Layout lay(config_);
  Tape tape;
  load_word(tape, lay, alphabet_, word);
  const Network net(lay, params_.data());
  net.run(tape);
  TraceRecord rec;
  rec.word = std::string(word);
  rec.steps.reserve(word.size());
  for (std::size_t t = 0; t < word.size(); ++t) {
    const auto first = tape.h.begin() + static_cast<std::ptrdiff_t>((t + 1) * lay.n);
    rec.steps.push_back({word[t], std::vector<double>(first, first + static_cast<std::ptrdiff_t>(lay.n)),
                         net.output_at(tape, t)});
  }
  rec.initial_hidden.assign(lay.n, 0.0);
  rec.initial_output = sigmoid(params_[lay.c]);
  rec.probability = sigmoid(tape.logit);
  rec.prediction = rec.probability > 0.5;
  return rec;
}

std::uint64_t RnnModel::checksum() const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (double p : params_) {
    auto bits = std::bit_cast<std::uint64_t>(p);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

double RnnModel::loss_and_gradient(std::span<const LabeledString> examples, std::vector<double>& gradient) const {
  const Layout lay(config_);
  gradient.assign(params_.size(), 0.0);
  if (examples.empty()) return 0.0;
  const Network net(lay, params_.data());
  Tape tape;
  double total = 0.0;
  for (const auto& e : examples) {
    load_word(tape, lay, alphabet_, e.word);
    net.run(tape);
    total += bce(tape.logit, e.label);
    net.backward(tape, sigmoid(tape.logit) - (e.label ? 1.0 : 0.0), gradient.data());
  }
  const double inv = 1.0 / static_cast<double>(examples.size());
  for (auto& g : gradient) g *= inv;
  return total * inv;
}

double RnnModel::loss(std::span<const LabeledString> examples) const {
  if (examples.empty()) return 0.0;
  const Layout lay(config_);
  const Network net(lay, params_.data());
  Tape tape;
  double total = 0.0;
  for (const auto& e : examples) {
    load_word(tape, lay, alphabet_, e.word);
    net.run(tape);
    total += bce(tape.logit, e.label);
  }
  return total / static_cast<double>(examples.size());
}

std::pair<double, TraceRecord> forward(const RnnModel& model, std::string_view word) {
  TraceRecord rec = model.trace(word);
  return {rec.probability, std::move(rec)};
}

double evaluate(const RnnModel& model, const Dataset& d) {
  if (d.examples.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const auto& e : d.examples) {
    if ((model.probability(e.word) > 0.5) != e.label) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(d.examples.size());
}

std::vector<TraceRecord> record_traces(const RnnModel& model, const Dataset& d) {
  std::vector<TraceRecord> out;
  out.reserve(d.examples.size());
  for (const auto& e : d.examples) out.push_back(model.trace(e.word));
  return out;
}

TrainReport train(RnnModel& model, const Dataset& train_set, const Dataset& test_set, const TrainOptions& options) {
  if (!(train_set.alphabet == model.alphabet()) || (!test_set.examples.empty() && !(test_set.alphabet == model.alphabet()))) {
    throw InvalidArgument("train: dataset alphabet differs from the model alphabet");
  }
  const auto started = std::chrono::steady_clock::now();
  const ModelConfig& cfg = model.config();
  const Layout lay(cfg);
  TrainReport report;
  auto finish = [&] {
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.checksum = model.checksum();
  };

  std::vector<std::size_t> marks = options.checkpoints;
  std::sort(marks.begin(), marks.end());
  std::size_t next_mark = 0;

  auto params = model.parameters();
  std::vector<double> grad(params.size()), m(params.size(), 0.0), v(params.size(), 0.0);
  constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double beta1_t = 1.0, beta2_t = 1.0;
  Rng dropout_rng(derive_seed(cfg.seed, "rnn-dropout"));
  const double keep_scale = cfg.dropout > 0.0 ? 1.0 / (1.0 - cfg.dropout) : 1.0;
  Tape tape;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
      report.timed_out = true;
      break;
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    const Network net(lay, params.data());
    double total = 0.0;
    for (const auto& e : train_set.examples) {
      load_word(tape, lay, model.alphabet(), e.word);
      if (cfg.dropout > 0.0) {
        for (auto& s : tape.scale) s = dropout_rng.uniform() < cfg.dropout ? 0.0 : keep_scale;
      }
      net.run(tape);
      total += bce(tape.logit, e.label);
      net.backward(tape, sigmoid(tape.logit) - (e.label ? 1.0 : 0.0), grad.data());
    }
    const double inv = train_set.examples.empty() ? 0.0 : 1.0 / static_cast<double>(train_set.examples.size());
    const double loss = total * inv;
    report.loss.push_back(loss);
    report.epochs_run = epoch;
    if (!std::isfinite(loss)) {
      finish();
      throw TrainingDiverged("train: non-finite loss at epoch " + std::to_string(epoch), report);
    }

    beta1_t *= beta1;
    beta2_t *= beta2;
    const double lr_t = cfg.learning_rate * std::sqrt(1.0 - beta2_t) / (1.0 - beta1_t);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double g = grad[i] * inv;
      m[i] = beta1 * m[i] + (1.0 - beta1) * g;
      v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
      params[i] -= lr_t * m[i] / (std::sqrt(v[i]) + eps);
    }

    const bool at_mark = next_mark < marks.size() && marks[next_mark] == epoch;
    const bool periodic = options.eval_every && epoch % options.eval_every == 0;
    if ((at_mark || periodic) && !test_set.examples.empty()) {
      report.test_error.emplace_back(epoch, evaluate(model, test_set));
    }
    while (next_mark < marks.size() && marks[next_mark] <= epoch) {
      if (marks[next_mark] == epoch && options.on_checkpoint) {
        const double err = test_set.examples.empty() ? 0.0 : report.test_error.back().second;
        options.on_checkpoint(epoch, model, err);
      }
      ++next_mark;
    }
  }
  finish();
  return report;
}

namespace {

// Loss of one word evaluated in long double, so that central differences
// resolve components far below the double rounding level of the loss.
long double extended_loss(const Layout& lay, const std::vector<long double>& p, const std::vector<SymbolIndex>& word,
                          bool label) {
  const std::size_t n = lay.n;
  auto sig = [](long double x) { return 1.0L / (1.0L + std::exp(-x)); };
  std::vector<long double> h(n, 0.0L), c(n, 0.0L), hn(n), act(lay.gates * n), rh(n);
  auto pre = [&](std::size_t row, SymbolIndex a, const std::vector<long double>& state) {
    long double x = p[lay.w + row * lay.l + a] + p[lay.b + row];
    for (std::size_t k = 0; k < n; ++k) x += p[lay.u + row * n + k] * state[k];
    return x;
  };
  for (SymbolIndex a : word) {
    if (lay.gates == 3) {
      for (std::size_t row = 0; row < 2 * n; ++row) act[row] = sig(pre(row, a, h));
      for (std::size_t k = 0; k < n; ++k) rh[k] = act[n + k] * h[k];
      for (std::size_t j = 0; j < n; ++j) {
        const long double cand = std::tanh(pre(2 * n + j, a, rh));
        hn[j] = (1.0L - act[j]) * cand + act[j] * h[j];
      }
    } else {
      for (std::size_t row = 0; row < 4 * n; ++row) {
        const long double x = pre(row, a, h);
        act[row] = (row >= 2 * n && row < 3 * n) ? std::tanh(x) : sig(x);
      }
      for (std::size_t j = 0; j < n; ++j) {
        c[j] = act[n + j] * c[j] + act[j] * act[2 * n + j];
        hn[j] = act[3 * n + j] * std::tanh(c[j]);
      }
    }
    h.swap(hn);
  }
  long double logit = p[lay.c];
  for (std::size_t j = 0; j < n; ++j) logit += p[lay.v + j] * h[j];
  const long double softplus = logit > 0 ? logit + std::log1p(std::exp(-logit)) : std::log1p(std::exp(logit));
  return softplus - (label ? logit : 0.0L);
}

}  // namespace

double gradient_check(const RnnModel& model, const LabeledString& example) {
  std::vector<double> analytic;
  const std::span<const LabeledString> one(&example, 1);
  model.loss_and_gradient(one, analytic);
  const Layout lay(model.config());
  const auto word = model.alphabet().encode(example.word);
  std::vector<long double> params(model.parameters().begin(), model.parameters().end());
  constexpr long double step = 1e-5L;
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const long double saved = params[i];
    params[i] = saved + step;
    const long double up = extended_loss(lay, params, word, example.label);
    params[i] = saved - step;
    const long double down = extended_loss(lay, params, word, example.label);
    params[i] = saved;
    const double numeric = static_cast<double>((up - down) / (2.0L * step));
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-7});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

std::string write_model(const RnnModel& model) {
  const auto& cfg = model.config();
  std::ostringstream out;
  char buf[40];
  out << "rnn v1\n";
  out << "cell: " << to_string(cfg.cell) << "\n";
  out << "alphabet: " << model.alphabet().to_string() << "\n";
  out << "hidden: " << cfg.hidden_size << "\n";
  out << "input: " << cfg.input_size << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", cfg.dropout);
  out << "dropout: " << buf << "\n";
  out << "epochs: " << cfg.epochs << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", cfg.learning_rate);
  out << "learning_rate: " << buf << "\n";
  out << "seed: " << cfg.seed << "\n";
  out << "parameters: " << model.parameter_count() << "\n";
  for (double p : model.parameters()) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out << buf << "\n";
  }
  return out.str();
}

RnnModel read_model(std::string_view content) {
  auto lines = text::content_lines(content);
  if (lines.empty() || lines.front().text != "rnn v1") throw ParseError("model: missing 'rnn v1' header");
  ModelConfig cfg;
  std::optional<Alphabet> alphabet;
  std::optional<std::size_t> count;
  std::size_t i = 1;
  for (; i < lines.size() && !count; ++i) {
    const auto& [number, line] = lines[i];
    if (auto v = text::field(line, "cell")) {
      cfg.cell = parse_cell_kind(*v);
    } else if (auto v = text::field(line, "alphabet")) {
      alphabet = Alphabet::parse(*v);
    } else if (auto v = text::field(line, "hidden")) {
      cfg.hidden_size = text::parse_uint<std::size_t>(*v, number);
    } else if (auto v = text::field(line, "input")) {
      cfg.input_size = text::parse_uint<std::size_t>(*v, number);
    } else if (auto v = text::field(line, "dropout")) {
      cfg.dropout = text::parse_double(*v, number);
    } else if (auto v = text::field(line, "epochs")) {
      cfg.epochs = text::parse_uint<std::size_t>(*v, number);
    } else if (auto v = text::field(line, "learning_rate")) {
      cfg.learning_rate = text::parse_double(*v, number);
    } else if (auto v = text::field(line, "seed")) {
      cfg.seed = text::parse_uint<std::uint64_t>(*v, number);
    } else if (auto v = text::field(line, "parameters")) {
      count = text::parse_uint<std::size_t>(*v, number);
    } else {
      throw ParseError("model: line " + std::to_string(number) + ": unexpected '" + line + "'");
    }
  }
  if (!alphabet || !count) throw ParseError("model: missing alphabet or parameters line");
  std::vector<double> params;
  for (; i < lines.size(); ++i) params.push_back(text::parse_double(lines[i].text, lines[i].number));
  if (params.size() != *count) throw ParseError("model: parameter count mismatch");
  try {
    return RnnModel::from_parameters(cfg, *alphabet, std::move(params));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

void save_model(const std::filesystem::path& path, const RnnModel& model) { write_text_file(path, write_model(model)); }

RnnModel load_model(const std::filesystem::path& path) { return read_model(read_text_file(path)); }

}  // namespace pathrules
