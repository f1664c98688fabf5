#include "pathrules/simdist.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "pathrules/dataset.hpp"
#include "pathrules/error.hpp"
#include "pathrules/rng.hpp"

namespace pathrules {
namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

// Relaxes d[next(q, a)] <= d[q] + 1 to a fixpoint (unit-weight Dijkstra).
void close_insertions(const Fsa& lang, std::vector<std::size_t>& d) {
  using Item = std::pair<std::size_t, StateId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (std::size_t q = 0; q < d.size(); ++q) {
    if (d[q] != kInf) queue.emplace(d[q], static_cast<StateId>(q));
  }
  const std::size_t symbols = lang.alphabet().size();
  while (!queue.empty()) {
    auto [dist, q] = queue.top();
    queue.pop();
    if (dist != d[q]) continue;
    for (std::size_t a = 0; a < symbols; ++a) {
      const StateId r = lang.next(q, static_cast<SymbolIndex>(a));
      if (dist + 1 < d[r]) {
        d[r] = dist + 1;
        queue.emplace(d[r], r);
      }
    }
  }
}

__uint128_t mul(std::uint64_t a, std::uint64_t b) { return static_cast<__uint128_t>(a) * b; }

}  // namespace

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  if (a.infinite || b.infinite) return a.infinite <=> b.infinite;
  const auto lhs = mul(a.num, b.den);
  const auto rhs = mul(b.num, a.den);
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double Ratio::value() const {
  return infinite ? std::numeric_limits<double>::infinity() : static_cast<double>(num) / static_cast<double>(den);
}

std::string Ratio::to_string() const {
  if (infinite) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", value());
  return buf;
}

std::optional<std::size_t> edit_distance(std::string_view word, const Fsa& lang) {
  const std::size_t n = lang.state_count();
  const std::size_t symbols = lang.alphabet().size();
  std::vector<std::size_t> cur(n, kInf), next(n);
  cur[lang.start()] = 0;
  close_insertions(lang, cur);
  for (char c : word) {
    const auto sym = lang.alphabet().find(c);
    std::fill(next.begin(), next.end(), kInf);
    for (std::size_t q = 0; q < n; ++q) {
      if (cur[q] == kInf) continue;
      next[q] = std::min(next[q], cur[q] + 1);  // delete c
      for (std::size_t a = 0; a < symbols; ++a) {
        const StateId r = lang.next(static_cast<StateId>(q), static_cast<SymbolIndex>(a));
        const std::size_t cost = cur[q] + (sym && *sym == a ? 0 : 1);  // match or substitute
        next[r] = std::min(next[r], cost);
      }
    }
    close_insertions(lang, next);
    cur.swap(next);
  }
  std::size_t best = kInf;
  for (std::size_t q = 0; q < n; ++q) {
    if (lang.is_accepting(static_cast<StateId>(q))) best = std::min(best, cur[q]);
  }
  if (best == kInf) return std::nullopt;
  return best;
}

EditResult edit_ratio(std::string_view word, const Fsa& lang) {
  if (word.empty()) throw InvalidArgument("edit_ratio: empty word");
  EditResult r{std::string(word), edit_distance(word, lang), Ratio::inf()};
  if (r.distance) r.ratio = {*r.distance, word.size(), false};
  return r;
}

std::size_t edit_oracle_bruteforce(std::string_view word, const Fsa& lang, std::size_t max_distance) {
  const auto& symbols = lang.alphabet().symbols();
  std::set<std::string> seen{std::string(word)};
  std::vector<std::string> frontier{std::string(word)};
  for (std::size_t d = 0;; ++d) {
    for (const auto& w : frontier) {
      bool ok = true;
      for (char c : w) ok = ok && lang.alphabet().contains(c);
      if (ok && lang.accepts(w)) return d;
    }
    if (d == max_distance) {
      throw InfeasibleRequest("edit_oracle_bruteforce: distance exceeds " + std::to_string(max_distance));
    }
    std::vector<std::string> next;
    auto visit = [&](std::string candidate) {
      if (seen.insert(candidate).second) next.push_back(std::move(candidate));
    };
    for (const auto& w : frontier) {
      for (std::size_t i = 0; i <= w.size(); ++i) {
        for (char c : symbols) visit(w.substr(0, i) + c + w.substr(i));
        if (i < w.size()) {
          visit(w.substr(0, i) + w.substr(i + 1));
          for (char c : symbols) {
            if (c != w[i]) {
              std::string s = w;
              s[i] = c;
              visit(std::move(s));
            }
          }
        }
      }
    }
    frontier.swap(next);
  }
}

DeltaHat delta_hat(const std::vector<std::string>& samples, const Fsa& lang_b) {
  if (samples.empty()) throw InfeasibleRequest("delta_hat: empty sample set");
  DeltaHat out{Ratio{}, {}, samples.size()};
  bool first = true;
  for (const auto& w : samples) {
    const EditResult r = edit_ratio(w, lang_b);
    if (first || r.ratio > out.value) {
      out.value = r.ratio;
      out.witness = w;
      first = false;
    }
  }
  return out;
}

std::vector<std::string> sample_language(const Fsa& lang, std::size_t n, std::uint64_t seed, std::size_t max_len) {
  const std::uint64_t available = count_words(lang, 1, max_len, true);
  const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(available, n));
  std::vector<std::string> out;
  if (count == 0) return out;
  SamplerConfig cfg;
  cfg.count = count;
  cfg.min_len = 1;
  cfg.max_len = max_len;
  cfg.positive_ratio = 1.0;
  cfg.seed = seed;
  for (auto& e : sample_strings(lang, cfg).examples) out.push_back(std::move(e.word));
  return out;
}

namespace {

DissimilarityReport compare_pools(const Fsa& a, const Fsa& b, const std::vector<std::string>& pool_a,
                                  const std::vector<std::string>& pool_b) {
  DissimilarityReport r;
  r.empty_a = language_empty(a);
  r.empty_b = language_empty(b);
  r.samples_a = pool_a.size();
  r.samples_b = pool_b.size();
  if (r.empty_a || r.empty_b) {
    r.delta_ab = r.empty_b && !r.empty_a ? Ratio::inf() : Ratio{};
    r.delta_ba = r.empty_a && !r.empty_b ? Ratio::inf() : Ratio{};
    r.delta = Ratio::inf();
    return r;
  }
  if (!pool_a.empty()) {
    auto d = delta_hat(pool_a, b);
    r.delta_ab = d.value;
    r.witness_ab = d.witness;
  }
  if (!pool_b.empty()) {
    auto d = delta_hat(pool_b, a);
    r.delta_ba = d.value;
    r.witness_ba = d.witness;
  }
  r.delta = std::max(r.delta_ab, r.delta_ba);
  return r;
}

}  // namespace

DissimilarityReport dissimilarity(const Fsa& a, const Fsa& b, std::size_t n_samples, std::uint64_t seed,
                                  std::size_t max_len) {
  if (n_samples < 1) throw InvalidArgument("dissimilarity: n_samples must be >= 1");
  if (!(a.alphabet() == b.alphabet())) throw InvalidArgument("dissimilarity: machines use different alphabets");
  const auto pool_a = sample_language(a, n_samples, derive_seed(seed, "dissimilarity-a"), max_len);
  const auto pool_b = sample_language(b, n_samples, derive_seed(seed, "dissimilarity-b"), max_len);
  auto r = compare_pools(a, b, pool_a, pool_b);
  r.requested = n_samples;
  r.max_len = max_len;
  r.seed = seed;
  return r;
}

std::string report_csv_header() { return "delta_ab,delta_ba,Delta,witness_ab,witness_ba,seed,requested,samples_a,samples_b,max_len"; }

std::string report_csv_row(const DissimilarityReport& r) {
  std::ostringstream out;
  out << r.delta_ab.to_string() << ',' << r.delta_ba.to_string() << ',' << r.delta.to_string() << ','
      << r.witness_ab << ',' << r.witness_ba << ',' << r.seed << ',' << r.requested << ',' << r.samples_a << ','
      << r.samples_b << ',' << r.max_len;
  return out.str();
}

std::string format_report(const DissimilarityReport& r) {
  std::ostringstream out;
  out << "delta(A->B) = " << r.delta_ab.to_string();
  if (!r.witness_ab.empty()) out << "  (witness " << r.witness_ab << ")";
  out << "\ndelta(B->A) = " << r.delta_ba.to_string();
  if (!r.witness_ba.empty()) out << "  (witness " << r.witness_ba << ")";
  out << "\nDelta       = " << r.delta.to_string() << "\n";
  out << "samples: A=" << r.samples_a << " B=" << r.samples_b << " requested=" << r.requested
      << " max_len=" << r.max_len << " seed=" << r.seed << "\n";
  if (r.empty_a) out << "note: language A is empty\n";
  if (r.empty_b) out << "note: language B is empty\n";
  if (r.samples_a < r.requested && !r.empty_a) out << "note: language A supplied only " << r.samples_a << " words\n";
  if (r.samples_b < r.requested && !r.empty_b) out << "note: language B supplied only " << r.samples_b << " words\n";
  return out.str();
}

ComparisonMatrix pairwise_matrix(const std::vector<Fsa>& machines, std::size_t n_samples, std::uint64_t seed,
                                 std::size_t max_len) {
  if (machines.size() < 2) throw InvalidArgument("pairwise_matrix: need at least two machines");
  for (const auto& m : machines) {
    if (!(m.alphabet() == machines.front().alphabet())) {
      throw InvalidArgument("pairwise_matrix: machines use different alphabets");
    }
  }
  std::vector<std::vector<std::string>> pools;
  for (std::size_t i = 0; i < machines.size(); ++i) {
    pools.push_back(sample_language(machines[i], n_samples, derive_seed(seed, "pool-" + std::to_string(i)), max_len));
  }
  const std::size_t n = machines.size();
  ComparisonMatrix m{std::vector<std::vector<Ratio>>(n, std::vector<Ratio>(n)), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m.delta[i][j] = m.delta[j][i] = compare_pools(machines[i], machines[j], pools[i], pools[j]).delta;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) sum += m.delta[i][j].value();
    }
    m.row_mean[i] = sum / static_cast<double>(n - 1);
  }
  return m;
}

std::size_t select_representative(const ComparisonMatrix& m) {
  std::size_t best = 0;
  bool found = false;
  for (std::size_t i = 0; i < m.row_mean.size(); ++i) {
    if (std::isinf(m.row_mean[i])) continue;
    if (!found || m.row_mean[i] < m.row_mean[best]) {
      best = i;
      found = true;
    }
  }
  if (!found) throw InfeasibleRequest("select_representative: every row is infinite");
  return best;
}

}  // namespace pathrules
