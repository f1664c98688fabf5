#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathrules/fsa.hpp"

namespace pathrules {

/// Non-negative rational compared exactly by cross-multiplication, or +inf.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  bool infinite = false;

  static Ratio inf() { return {0, 1, true}; }
  double value() const;
  bool is_zero() const { return !infinite && num == 0; }
  std::string to_string() const;  // "inf" or decimal with 6 digits

  friend bool operator==(const Ratio& a, const Ratio& b) { return (a <=> b) == 0; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);
};

/// Edit cost of one word against a language.
struct EditResult {
  std::string word;
  std::optional<std::size_t> distance;  // nullopt when the language is empty
  Ratio ratio;                          // distance / |word|, inf for an empty language
};

/// Minimum number of unit-cost insertions, deletions and substitutions that
/// turn `word` into a word accepted by `lang`. Dynamic programming over
/// (prefix length, state); insertions are closed with a shortest-path pass
/// per layer. Symbols outside the alphabet never match. nullopt iff the
/// language is empty.
std::optional<std::size_t> edit_distance(std::string_view word, const Fsa& lang);

/// Throws InvalidArgument on an empty word.
EditResult edit_ratio(std::string_view word, const Fsa& lang);

/// Independent check of edit_distance: iterative deepening over the edit
/// neighbourhood of `word`. Throws InfeasibleRequest beyond `max_distance`.
std::size_t edit_oracle_bruteforce(std::string_view word, const Fsa& lang, std::size_t max_distance);

struct DeltaHat {
  Ratio value;
  std::string witness;  // a sample achieving the maximum (first in input order)
  std::size_t samples = 0;
};

/// max over samples of edit_distance(w, lang_b) / |w|. Throws
/// InfeasibleRequest on an empty sample list, InvalidArgument on an empty word.
DeltaHat delta_hat(const std::vector<std::string>& samples, const Fsa& lang_b);

/// Up to n distinct non-empty accepted words of length <= max_len, sampled
/// with the length-stratified sampler. All words are returned when the
/// language has fewer.
std::vector<std::string> sample_language(const Fsa& lang, std::size_t n, std::uint64_t seed,
                                         std::size_t max_len = 30);

struct DissimilarityReport {
  Ratio delta_ab;
  Ratio delta_ba;
  Ratio delta;  // max(delta_ab, delta_ba)
  std::string witness_ab;
  std::string witness_ba;
  std::size_t requested = 0;
  std::size_t samples_a = 0;
  std::size_t samples_b = 0;
  std::size_t max_len = 30;
  std::uint64_t seed = 0;
  bool empty_a = false;
  bool empty_b = false;
};

/// Sampled symmetric dissimilarity. An empty language on either side makes
/// the result infinite. Both machines must share an alphabet.
DissimilarityReport dissimilarity(const Fsa& a, const Fsa& b, std::size_t n_samples, std::uint64_t seed,
                                  std::size_t max_len = 30);

std::string report_csv_header();
std::string report_csv_row(const DissimilarityReport& r);
std::string format_report(const DissimilarityReport& r);

struct ComparisonMatrix {
  std::vector<std::vector<Ratio>> delta;
  std::vector<double> row_mean;  // mean over off-diagonal entries; inf if any is inf
};

/// Each machine's sample pool is drawn once (seed derived from `seed` and
/// the machine index) and reused for every pair.
ComparisonMatrix pairwise_matrix(const std::vector<Fsa>& machines, std::size_t n_samples, std::uint64_t seed,
                                 std::size_t max_len = 30);

/// Index of the smallest row mean, ties to the lowest index. Throws
/// InfeasibleRequest when every row is infinite.
std::size_t select_representative(const ComparisonMatrix& m);

}  // namespace pathrules
