#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pathrules/alphabet.hpp"
#include "pathrules/fsa.hpp"

namespace pathrules {

/// A path string and its classification (true = accepted / secure).
struct LabeledString {
  std::string word;
  bool label = false;

  bool operator==(const LabeledString&) const = default;
};

/// Unique labeled words over one alphabet.
struct Dataset {
  Alphabet alphabet;
  std::vector<LabeledString> examples;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return examples.size(); }
  std::size_t positives() const noexcept;
  double positive_ratio() const noexcept;
  std::unordered_set<std::string> words() const;
  /// Throws InvalidArgument on an empty or duplicate word or a foreign symbol.
  void validate() const;
};

struct SamplerConfig {
  std::size_t count = 1000;
  std::size_t min_len = 1;
  std::size_t max_len = 12;
  /// Fraction of accepted words; positives = round(count * ratio).
  double positive_ratio = 0.5;
  std::uint64_t seed = 1;
};

/// Length-stratified uniform sampling of unique labeled words.
///
/// For each requested class a length is drawn uniformly among the lengths in
/// [min_len, max_len] that still have unused words of that class, then a word
/// is drawn uniformly among the words of that length and class using
/// per-state completion counts. Words in `exclude` are never returned.
/// Throws InfeasibleRequest when the bounds cannot supply enough words.
Dataset sample_strings(const Fsa& target, const SamplerConfig& cfg,
                       const std::unordered_set<std::string>& exclude = {});

/// Number of words with the given label and length in [min_len, max_len],
/// saturated at 2^62.
std::uint64_t count_words(const Fsa& target, std::size_t min_len, std::size_t max_len, bool label);

/// Deterministic shuffle followed by a cut at round(size * train_fraction).
std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction, std::uint64_t seed);

/// Subset with round(n * ratio) positives. With `count` the subset has that
/// size (InfeasibleRequest if either class is short); otherwise n is the
/// largest size the two classes allow.
Dataset rebalance(const Dataset& d, double positive_ratio, std::optional<std::size_t> count,
                  std::uint64_t seed);

/// Per-state symbol weights for biased random walks; rows may be left empty
/// for a uniform choice.
using WalkWeights = std::vector<std::vector<double>>;

/// Unique words produced by random walks over `target` whose symbol choice
/// at each state follows `weights`; lengths uniform in [min_len, max_len].
/// Labels come from `target`.
Dataset sample_walks(const Fsa& target, const WalkWeights& weights, std::size_t count, std::size_t min_len,
                     std::size_t max_len, std::uint64_t seed);

// Dataset file: header "dataset v1 alphabet: t p s seed: N" followed by one
// "<0|1> <word>" record per line.
std::string write_dataset(const Dataset& d);
Dataset read_dataset(std::string_view text);
void save_dataset(const std::filesystem::path& path, const Dataset& d);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace pathrules
