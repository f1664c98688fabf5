#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pathrules/dataset.hpp"
#include "pathrules/fsa.hpp"

namespace pathrules {

/// Empirical outgoing-symbol frequencies per automaton state, gathered from
/// the runs of a corpus.
struct MarkovAnnotation {
  Alphabet alphabet;
  std::vector<std::vector<std::uint64_t>> counts;  // [state][symbol]
  std::vector<std::vector<double>> probabilities;  // rows of unvisited states are all zero

  bool visited(StateId q) const;
  double probability(StateId q, char symbol) const;
};

struct MarkovFlag {
  StateId state;
  char symbol;
  double probability;
};

MarkovAnnotation estimate_markov(const Fsa& target, const Dataset& corpus);

/// (state, symbol) pairs of visited states whose probability is below
/// `threshold`, in state then alphabet order.
std::vector<MarkovFlag> underrepresented(const MarkovAnnotation& annotation, double threshold = 0.1);

/// Human-readable table, one line per visited state.
std::string format_markov(const MarkovAnnotation& annotation, double threshold = 0.1);

}  // namespace pathrules
