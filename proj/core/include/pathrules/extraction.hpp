#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "pathrules/dataset.hpp"
#include "pathrules/fsa.hpp"
#include "pathrules/quantizer.hpp"
#include "pathrules/rnn.hpp"
#include "pathrules/ssm.hpp"

namespace pathrules {

/// How points of a state being split are grouped into outcome classes.
enum class OutcomeKey {
  /// Only points whose next input is the victim's most entropic input take
  /// part; they are grouped by (output, next state).
  ConflictCell,
  /// Every point of the victim, grouped by (input, output, next state).
  FullStep,
};

struct ExtractionConfig {
  std::size_t max_iterations = 100;
  double output_threshold = 0.5;
  double entropy_tolerance = 1e-9;
  OutcomeKey key = OutcomeKey::ConflictCell;
};

/// A hidden vector of the state being split, tagged with its outcome class.
struct KeyedPoint {
  std::vector<double> point;
  int input;  // -1 when the key ignores the input
  bool output;
  std::size_t next;

  auto key() const { return std::tuple(input, output, next); }
};

/// Replaces the region of `victim` by one child per outcome group, each
/// routed by nearest centroid (group mean). The first group keeps the victim
/// id, the others get fresh ids. Groups with identical means are fused.
/// Only leaves of the victim that hold some of the points are split.
/// Throws Unsplittable when fewer than two distinct groups remain.
QuantizerTree split_quantizer(const QuantizerTree& quantizer, std::size_t victim,
                              const std::vector<KeyedPoint>& points);

/// Fallback: threshold the coordinate of largest variance near its median.
/// Throws Unsplittable when all points coincide.
QuantizerTree split_quantizer_axis(const QuantizerTree& quantizer, std::size_t victim,
                                   const std::vector<KeyedPoint>& points);

struct ExtractedMachine {
  Alphabet alphabet;
  Ssm ssm;
  QuantizerTree quantizer;
  std::size_t initial_state = 0;
  bool deterministic = false;
  std::size_t iterations = 0;
  std::size_t fallback_splits = 0;
  std::vector<double> entropy_history;  // total entropy after each rebuild
};

/// Iterative split/merge extraction. Each round rebuilds the machine under
/// the current quantizer, merges equivalent states, stops if every cell is
/// deterministic, and otherwise splits the most entropic state. The initial
/// state is provisionally the state of the first trace's initial point,
/// which is renumbered to 0.
ExtractedMachine extract(const TraceSet& traces, const ExtractionConfig& cfg = {});
ExtractedMachine extract(const std::vector<TraceRecord>& traces, const Alphabet& alphabet,
                         const ExtractionConfig& cfg = {});

struct Projection {
  Fsa fsa;                  // not minimized; state ids match the machine, plus a sink
  double min_agreement;     // worst per-state share of landings agreeing with its label
  bool lossy;               // a nondeterministic cell was resolved by majority
};

/// Deterministic projection with the given start state. Cells resolve to
/// the next state with the largest count; a state accepts iff more of the
/// landings on it carry "accept" than "reject" (states without landings
/// reject); empty cells go to a sink. Unless `forced`, a nondeterministic
/// machine is rejected with InvalidArgument; in forced mode a tie between
/// the top next states throws InvalidArgument ("irreconcilable cell") when
/// `strict_ties`, else resolves to the lower id.
Projection project(const ExtractedMachine& m, std::size_t start, bool forced = false, bool strict_ties = true);

/// Start state whose projection classifies `train` best; ties to lowest id.
std::size_t choose_initial_state(const ExtractedMachine& m, const Dataset& train);

/// Minimized projection from m.initial_state.
Fsa to_fsa(const ExtractedMachine& m, bool forced = false);

/// "key: value" sidecar describing an extraction run.
std::string write_extraction_metadata(const ExtractedMachine& m);

}  // namespace pathrules
