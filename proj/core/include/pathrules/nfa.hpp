#pragma once

#include <optional>
#include <set>
#include <vector>

#include "pathrules/alphabet.hpp"
#include "pathrules/fsa.hpp"

namespace pathrules {

/// Nondeterministic automaton with epsilon moves. Used as the output of
/// Thompson construction and as input to subset construction.
class Nfa {
 public:
  struct Transition {
    std::optional<SymbolIndex> symbol;  // nullopt = epsilon
    StateId to;
  };

  explicit Nfa(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  StateId add_state();
  void add_transition(StateId from, std::optional<SymbolIndex> symbol, StateId to);
  void add_epsilon(StateId from, StateId to) { add_transition(from, std::nullopt, to); }
  void add_start(StateId q);
  void set_accepting(StateId q, bool accepting = true);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t state_count() const noexcept { return out_.size(); }
  const std::set<StateId>& starts() const noexcept { return starts_; }
  const std::set<StateId>& accepting() const noexcept { return accepting_; }
  const std::vector<Transition>& transitions(StateId q) const { return out_.at(q); }

  std::set<StateId> epsilon_closure(std::set<StateId> states) const;
  /// Direct simulation; used by tests as a second route to membership.
  bool accepts(std::string_view word) const;

 private:
  void check(StateId q) const;

  Alphabet alphabet_;
  std::vector<std::vector<Transition>> out_;
  std::set<StateId> starts_;
  std::set<StateId> accepting_;
};

/// Subset construction. The result is complete (the empty subset becomes
/// the sink) and numbered in discovery order; it is not minimized.
Fsa determinize(const Nfa& nfa);

}  // namespace pathrules
