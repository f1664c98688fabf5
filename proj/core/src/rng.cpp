#include "pathrules/rng.hpp"

#include "pathrules/error.hpp"

namespace pathrules {

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = base ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::weighted(const std::vector<long double>& weights) {
  long double total = 0;
  for (auto w : weights) total += w;
  if (!(total > 0)) throw InvalidArgument("Rng::weighted: all weights are zero");
  const long double x = static_cast<long double>(uniform()) * total;
  long double acc = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    acc += weights[i];
    last = i;
    if (x < acc) return i;
  }
  return last;
}

std::size_t Rng::weighted(const std::vector<double>& weights) {
  return weighted(std::vector<long double>(weights.begin(), weights.end()));
}

}  // namespace pathrules
