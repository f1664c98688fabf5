#include "pathrules/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pathrules/error.hpp"
#include "pathrules/fsa_io.hpp"
#include "pathrules/rng.hpp"
#include "pathrules/text.hpp"

namespace pathrules {
namespace {

constexpr long double kSaturation = 4611686018427387904.0L;  // 2^62

// accepted[n][q]: number of words of length n leading from q to acceptance.
class CompletionCounts {
 public:
  CompletionCounts(const Fsa& fsa, std::size_t max_len) : fsa_(fsa) {
    const std::size_t n = fsa.state_count();
    const std::size_t symbols = fsa.alphabet().size();
    accepted_.assign(max_len + 1, std::vector<long double>(n, 0));
    total_.assign(max_len + 1, 1);
    for (std::size_t q = 0; q < n; ++q) accepted_[0][q] = fsa.is_accepting(static_cast<StateId>(q)) ? 1 : 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
      total_[len] = total_[len - 1] * static_cast<long double>(symbols);
      for (std::size_t q = 0; q < n; ++q) {
        long double sum = 0;
        for (std::size_t a = 0; a < symbols; ++a) {
          sum += accepted_[len - 1][fsa.next(static_cast<StateId>(q), static_cast<SymbolIndex>(a))];
        }
        accepted_[len][q] = sum;
      }
    }
  }

  long double count(std::size_t len, StateId q, bool label) const {
    return label ? accepted_[len][q] : total_[len] - accepted_[len][q];
  }

  std::string draw(std::size_t len, bool label, Rng& rng) const {
    const std::size_t symbols = fsa_.alphabet().size();
    std::string word;
    word.reserve(len);
    StateId q = fsa_.start();
    std::vector<long double> weights(symbols);
    for (std::size_t remaining = len; remaining > 0; --remaining) {
      for (std::size_t a = 0; a < symbols; ++a) {
        weights[a] = count(remaining - 1, fsa_.next(q, static_cast<SymbolIndex>(a)), label);
      }
      const auto a = static_cast<SymbolIndex>(rng.weighted(weights));
      word.push_back(fsa_.alphabet().symbol(a));
      q = fsa_.next(q, a);
    }
    return word;
  }

 private:
  const Fsa& fsa_;
  std::vector<std::vector<long double>> accepted_;
  std::vector<long double> total_;
};

}  // namespace

std::size_t Dataset::positives() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(examples.begin(), examples.end(), [](const auto& e) { return e.label; }));
}

double Dataset::positive_ratio() const noexcept {
  return examples.empty() ? 0.0 : static_cast<double>(positives()) / static_cast<double>(examples.size());
}

std::unordered_set<std::string> Dataset::words() const {
  std::unordered_set<std::string> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.insert(e.word);
  return out;
}

void Dataset::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& e : examples) {
    if (e.word.empty()) throw InvalidArgument("dataset: empty word");
    for (char c : e.word) {
      if (!alphabet.contains(c)) throw UnknownSymbol(c);
    }
    if (!seen.insert(e.word).second) throw InvalidArgument("dataset: duplicate word '" + e.word + "'");
  }
}

std::uint64_t count_words(const Fsa& target, std::size_t min_len, std::size_t max_len, bool label) {
  if (min_len > max_len) return 0;
  CompletionCounts counts(target, max_len);
  long double total = 0;
  for (std::size_t len = min_len; len <= max_len; ++len) total += counts.count(len, target.start(), label);
  return total >= kSaturation ? static_cast<std::uint64_t>(kSaturation) : static_cast<std::uint64_t>(total);
}

Dataset sample_strings(const Fsa& target, const SamplerConfig& cfg,
                       const std::unordered_set<std::string>& exclude) {
  if (cfg.count < 1) throw InvalidArgument("sample_strings: count must be >= 1");
  if (cfg.min_len < 1 || cfg.min_len > cfg.max_len) {
    throw InvalidArgument("sample_strings: need 1 <= min_len <= max_len");
  }
  if (!(cfg.positive_ratio >= 0.0 && cfg.positive_ratio <= 1.0)) {
    throw InvalidArgument("sample_strings: positive_ratio must lie in [0, 1]");
  }

  const CompletionCounts counts(target, cfg.max_len);
  const std::size_t lengths = cfg.max_len - cfg.min_len + 1;
  const auto positives_wanted =
      static_cast<std::size_t>(std::llround(static_cast<double>(cfg.count) * cfg.positive_ratio));
  const std::size_t wanted[2] = {cfg.count - positives_wanted, positives_wanted};

  // remaining[label][len - min_len]: unused words still available.
  std::vector<long double> remaining[2];
  for (int label = 0; label < 2; ++label) {
    remaining[label].resize(lengths);
    for (std::size_t i = 0; i < lengths; ++i) {
      remaining[label][i] = counts.count(cfg.min_len + i, target.start(), label == 1);
    }
  }
  for (const auto& w : exclude) {
    if (w.size() < cfg.min_len || w.size() > cfg.max_len) continue;
    bool ok = true;
    for (char c : w) ok = ok && target.alphabet().contains(c);
    if (!ok) continue;
    remaining[target.accepts(w) ? 1 : 0][w.size() - cfg.min_len] -= 1;
  }
  for (int label = 0; label < 2; ++label) {
    long double available = 0;
    for (auto r : remaining[label]) available += r;
    if (available < static_cast<long double>(wanted[label])) {
      throw InfeasibleRequest("sample_strings: only " + std::to_string(static_cast<double>(available)) + " " +
                              (label ? "accepted" : "rejected") + " words of length " +
                              std::to_string(cfg.min_len) + ".." + std::to_string(cfg.max_len) +
                              " available, " + std::to_string(wanted[label]) + " requested");
    }
  }

  Rng rng(cfg.seed);
  Dataset out{target.alphabet(), {}, cfg.seed};
  out.examples.reserve(cfg.count);
  std::unordered_set<std::string> taken;
  const std::size_t attempt_budget = 200 * cfg.count + 100000;
  std::size_t attempts = 0;

  for (int label = 1; label >= 0; --label) {
    std::size_t got = 0;
    auto& rem = remaining[label];
    while (got < wanted[label]) {
      std::vector<long double> open(lengths);
      for (std::size_t i = 0; i < lengths; ++i) open[i] = rem[i] >= 1 ? 1 : 0;
      const std::size_t li = rng.weighted(open);
      std::string word = counts.draw(cfg.min_len + li, label == 1, rng);
      if (++attempts > attempt_budget) {
        throw InfeasibleRequest("sample_strings: attempt budget exhausted before finding enough unique words");
      }
      if (exclude.count(word) || !taken.insert(word).second) continue;
      rem[li] -= 1;
      out.examples.push_back({std::move(word), label == 1});
      ++got;
    }
  }
  rng.shuffle(out.examples);
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("split: train_fraction must lie in (0, 1)");
  }
  auto examples = d.examples;
  Rng rng(seed);
  rng.shuffle(examples);
  const auto cut = static_cast<std::size_t>(std::llround(static_cast<double>(examples.size()) * train_fraction));
  Dataset train{d.alphabet, {examples.begin(), examples.begin() + static_cast<std::ptrdiff_t>(cut)}, seed};
  Dataset test{d.alphabet, {examples.begin() + static_cast<std::ptrdiff_t>(cut), examples.end()}, seed};
  return {std::move(train), std::move(test)};
}

Dataset rebalance(const Dataset& d, double positive_ratio, std::optional<std::size_t> count, std::uint64_t seed) {
  if (!(positive_ratio >= 0.0 && positive_ratio <= 1.0)) {
    throw InvalidArgument("rebalance: positive_ratio must lie in [0, 1]");
  }
  std::vector<LabeledString> pos;
  std::vector<LabeledString> neg;
  for (const auto& e : d.examples) (e.label ? pos : neg).push_back(e);

  auto positives_for = [&](std::size_t n) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n) * positive_ratio));
  };
  std::size_t n = 0;
  if (count) {
    n = *count;
    if (positives_for(n) > pos.size() || n - positives_for(n) > neg.size()) {
      throw InfeasibleRequest("rebalance: " + std::to_string(pos.size()) + " positives and " +
                              std::to_string(neg.size()) + " negatives cannot form " + std::to_string(n) +
                              " examples at ratio " + std::to_string(positive_ratio));
    }
  } else {
    n = d.size();
    while (n > 0 && (positives_for(n) > pos.size() || n - positives_for(n) > neg.size())) --n;
  }

  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  Dataset out{d.alphabet, {}, seed};
  const std::size_t p = positives_for(n);
  out.examples.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(p));
  out.examples.insert(out.examples.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(n - p));
  rng.shuffle(out.examples);
  return out;
}

Dataset sample_walks(const Fsa& target, const WalkWeights& weights, std::size_t count, std::size_t min_len,
                     std::size_t max_len, std::uint64_t seed) {
  if (min_len < 1 || min_len > max_len) throw InvalidArgument("sample_walks: need 1 <= min_len <= max_len");
  const std::size_t symbols = target.alphabet().size();
  for (const auto& row : weights) {
    if (!row.empty() && row.size() != symbols) throw InvalidArgument("sample_walks: weight row size mismatch");
  }
  const std::vector<double> uniform(symbols, 1.0);
  Rng rng(seed);
  Dataset out{target.alphabet(), {}, seed};
  std::unordered_set<std::string> taken;
  const std::size_t budget = 200 * count + 100000;
  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    if (attempt >= budget) throw InfeasibleRequest("sample_walks: could not find enough unique walks");
    const std::size_t len = min_len + rng.below(max_len - min_len + 1);
    std::string word;
    StateId q = target.start();
    for (std::size_t i = 0; i < len; ++i) {
      const auto& row = q < weights.size() && !weights[q].empty() ? weights[q] : uniform;
      const auto a = static_cast<SymbolIndex>(rng.weighted(row));
      word.push_back(target.alphabet().symbol(a));
      q = target.next(q, a);
    }
    if (!taken.insert(word).second) continue;
    out.examples.push_back({word, target.is_accepting(q)});
  }
  return out;
}

std::string write_dataset(const Dataset& d) {
  std::ostringstream out;
  out << "dataset v1 alphabet: " << d.alphabet.to_string() << " seed: " << d.seed << "\n";
  for (const auto& e : d.examples) out << (e.label ? 1 : 0) << ' ' << e.word << "\n";
  return out.str();
}

Dataset read_dataset(std::string_view content) {
  auto lines = text::content_lines(content);
  if (lines.empty()) throw ParseError("dataset: empty file");
  const std::string& header = lines.front().text;
  const auto a = header.find("alphabet:");
  const auto s = header.find("seed:");
  if (header.rfind("dataset v1", 0) != 0 || a == std::string::npos || s == std::string::npos || s < a) {
    throw ParseError("dataset: expected header 'dataset v1 alphabet: ... seed: N'");
  }
  Dataset d;
  d.alphabet = Alphabet::parse(header.substr(a + 9, s - a - 9));
  d.seed = text::parse_uint<std::uint64_t>(header.substr(s + 5), lines.front().number);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto tokens = text::split(lines[i].text);
    if (tokens.size() != 2 || (tokens[0] != "0" && tokens[0] != "1")) {
      throw ParseError("dataset: line " + std::to_string(lines[i].number) + ": expected '<0|1> <word>'");
    }
    d.examples.push_back({tokens[1], tokens[0] == "1"});
  }
  try {
    d.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return d;
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) { write_text_file(path, write_dataset(d)); }

Dataset load_dataset(const std::filesystem::path& path) { return read_dataset(read_text_file(path)); }

}  // namespace pathrules
