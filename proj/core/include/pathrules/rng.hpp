#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pathrules {

/// Deterministic sub-seed: FNV-1a over the label mixed into the base seed
/// with a splitmix64 finalizer.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label);

/// Thin wrapper over mt19937_64 with distribution code that does not
/// depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform double in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Index drawn proportionally to non-negative weights (at least one > 0).
  std::size_t weighted(const std::vector<long double>& weights);
  std::size_t weighted(const std::vector<double>& weights);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pathrules
