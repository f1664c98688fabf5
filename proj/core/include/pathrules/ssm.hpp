#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "pathrules/alphabet.hpp"
#include "pathrules/quantizer.hpp"
#include "pathrules/rnn.hpp"

namespace pathrules {

/// Recorded traces flattened into a point pool and a step list. Point i is
/// a hidden vector; each step reads one input from `from` and lands on `to`
/// with a thresholded output.
struct TraceSet {
  struct Step {
    std::size_t from;
    std::size_t to;
    SymbolIndex input;
    bool output;
  };

  Alphabet alphabet;
  std::size_t dimension = 0;
  std::vector<std::vector<double>> points;
  std::vector<Step> steps;
  /// Points that start a trace, with the output assigned to the empty prefix.
  std::vector<std::pair<std::size_t, bool>> initial_points;

  /// Throws InvalidArgument on an empty trace list or mixed hidden sizes.
  static TraceSet from_traces(const std::vector<TraceRecord>& traces, const Alphabet& alphabet,
                              double output_threshold = 0.5);
};

struct Outcome {
  std::size_t next;
  bool output;
  auto operator<=>(const Outcome&) const = default;
};

/// Substochastic sequential machine: outcome counts per (state, input)
/// cell. Conditional probabilities are the normalized counts of a cell;
/// cells without data have no distribution.
class Ssm {
 public:
  Ssm(std::size_t states, std::size_t inputs);

  std::size_t state_count() const noexcept { return states_; }
  std::size_t input_count() const noexcept { return inputs_; }

  void add(std::size_t state, SymbolIndex input, Outcome outcome, std::uint64_t count = 1);
  /// Records that some trace point with the given output lies in `state`.
  void add_landing(std::size_t state, bool output, std::uint64_t count = 1);

  const std::map<Outcome, std::uint64_t>& cell(std::size_t state, SymbolIndex input) const {
    return cells_.at(state * inputs_ + input);
  }
  bool populated(std::size_t state, SymbolIndex input) const { return !cell(state, input).empty(); }
  std::uint64_t cell_total(std::size_t state, SymbolIndex input) const;
  double probability(std::size_t state, SymbolIndex input, Outcome outcome) const;
  /// Shannon entropy (bits) of a cell's outcome distribution; 0 when empty.
  double cell_entropy(std::size_t state, SymbolIndex input) const;
  /// Entropy (bits) of the outputs carried by points landing in the state.
  double landing_entropy(std::size_t state) const;
  /// Landing entropy plus the cell entropies over inputs.
  double state_entropy(std::size_t state) const;
  double total_entropy() const;
  bool deterministic(double tolerance = 1e-9) const;
  std::uint64_t landings(std::size_t state, bool output) const { return landings_.at(state)[output ? 1 : 0]; }

  bool operator==(const Ssm&) const = default;

 private:
  std::size_t states_;
  std::size_t inputs_;
  std::vector<std::map<Outcome, std::uint64_t>> cells_;
  std::vector<std::array<std::uint64_t, 2>> landings_;
};

/// Counts every step of every trace under the quantizer. Throws
/// InvalidArgument on an empty trace set.
Ssm build_ssm(const TraceSet& traces, const QuantizerTree& quantizer);
Ssm build_ssm(const std::vector<TraceRecord>& traces, const QuantizerTree& quantizer, const Alphabet& alphabet);

/// State with the largest summed cell entropy, ties to the lowest id.
/// Throws InvalidArgument when every state is within tolerance.
std::size_t select_split_state(const Ssm& ssm, double tolerance = 1e-9);

struct MergeResult {
  Ssm ssm;
  std::vector<std::size_t> mapping;  // old state -> merged state
};

/// Coarsest partition in which merged states saw the same set of landing
/// outputs and agree, for every input, on
/// the set of (next-state class, output) outcomes they exhibit (an
/// unpopulated cell is its own behavior). Classes are numbered by their
/// lowest member.
MergeResult merge_equivalent(const Ssm& ssm);

}  // namespace pathrules
