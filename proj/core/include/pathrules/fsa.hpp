#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "pathrules/alphabet.hpp"

namespace pathrules {

using StateId = std::uint32_t;

/// Complete deterministic finite automaton. Transitions are stored
/// row-major: next(q, a) = table[q * |alphabet| + a].
class Fsa {
 public:
  struct Edge {
    StateId from;
    char symbol;
    StateId to;
  };

  Fsa(Alphabet alphabet, std::size_t state_count, StateId start, std::vector<bool> accepting,
      std::vector<StateId> transitions);

  /// Builds a machine from a possibly partial edge list. Missing
  /// (state, symbol) pairs are sent to a fresh non-accepting sink, which is
  /// only added when some pair is missing. Throws on nondeterminism.
  static Fsa from_edges(Alphabet alphabet, std::size_t state_count, StateId start,
                        const std::vector<StateId>& accepting, const std::vector<Edge>& edges);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t state_count() const noexcept { return accepting_.size(); }
  StateId start() const noexcept { return start_; }
  bool is_accepting(StateId q) const { return accepting_.at(q); }
  const std::vector<bool>& accepting() const noexcept { return accepting_; }
  std::vector<StateId> accepting_states() const;
  StateId next(StateId q, SymbolIndex a) const { return table_[q * alphabet_.size() + a]; }
  const std::vector<StateId>& table() const noexcept { return table_; }

  /// Throws UnknownSymbol.
  StateId run_from(StateId q, std::string_view word) const;
  StateId run(std::string_view word) const { return run_from(start_, word); }
  bool accepts(std::string_view word) const { return is_accepting(run(word)); }

  bool operator==(const Fsa&) const = default;

 private:
  Alphabet alphabet_;
  StateId start_;
  std::vector<bool> accepting_;
  std::vector<StateId> table_;
};

inline bool accepts(const Fsa& fsa, std::string_view word) { return fsa.accepts(word); }

/// Renumbers reachable states breadth-first from the start state, visiting
/// symbols in alphabet order. Unreachable states are dropped.
Fsa canonicalize(const Fsa& fsa);

/// Minimal, canonically numbered, language-equivalent machine.
Fsa minimize(const Fsa& fsa);

/// Structural identity after canonical relabeling. Meaningful on minimized
/// machines, where it coincides with language equality.
bool isomorphic(const Fsa& a, const Fsa& b);

/// Language equality (minimize both, compare canonically).
bool equivalent(const Fsa& a, const Fsa& b);

/// True when no accepting state is reachable.
bool language_empty(const Fsa& fsa);

/// Length of a shortest accepted word (0 when the empty word is accepted).
std::optional<std::size_t> shortest_accepted_length(const Fsa& fsa);

/// Same as shortest_accepted_length, restricted to non-empty words.
std::optional<std::size_t> shortest_nonempty_accepted_length(const Fsa& fsa);

/// Graphviz rendering with deterministic ordering: accepting states are
/// double circles, the start state is marked by an edge from a point node.
std::string to_dot(const Fsa& fsa, std::string_view graph_name = "fsa");

}  // namespace pathrules
