#include "pathrules/nfa.hpp"

#include <map>

#include "pathrules/error.hpp"

namespace pathrules {

StateId Nfa::add_state() {
  out_.emplace_back();
  return static_cast<StateId>(out_.size() - 1);
}

void Nfa::check(StateId q) const {
  if (q >= out_.size()) throw InvalidArgument("nfa: undeclared state " + std::to_string(q));
}

void Nfa::add_transition(StateId from, std::optional<SymbolIndex> symbol, StateId to) {
  check(from);
  check(to);
  if (symbol && *symbol >= alphabet_.size()) throw InvalidArgument("nfa: symbol index out of range");
  out_[from].push_back({symbol, to});
}

void Nfa::add_start(StateId q) {
  check(q);
  starts_.insert(q);
}

void Nfa::set_accepting(StateId q, bool accepting) {
  check(q);
  if (accepting) {
    accepting_.insert(q);
  } else {
    accepting_.erase(q);
  }
}

std::set<StateId> Nfa::epsilon_closure(std::set<StateId> states) const {
  std::vector<StateId> stack(states.begin(), states.end());
  while (!stack.empty()) {
    StateId q = stack.back();
    stack.pop_back();
    for (const auto& t : out_[q]) {
      if (!t.symbol && states.insert(t.to).second) stack.push_back(t.to);
    }
  }
  return states;
}

bool Nfa::accepts(std::string_view word) const {
  auto current = epsilon_closure(starts_);
  for (char c : word) {
    const SymbolIndex a = alphabet_.index(c);
    std::set<StateId> next;
    for (StateId q : current) {
      for (const auto& t : out_[q]) {
        if (t.symbol == a) next.insert(t.to);
      }
    }
    current = epsilon_closure(std::move(next));
  }
  for (StateId q : current) {
    if (accepting_.count(q)) return true;
  }
  return false;
}

Fsa determinize(const Nfa& nfa) {
  const std::size_t symbols = nfa.alphabet().size();
  std::map<std::set<StateId>, StateId> ids;
  std::vector<std::set<StateId>> subsets;
  std::vector<StateId> table;

  auto intern = [&](std::set<StateId> subset) {
    auto [it, inserted] = ids.emplace(std::move(subset), static_cast<StateId>(subsets.size()));
    if (inserted) subsets.push_back(it->first);
    return it->second;
  };

  intern(nfa.epsilon_closure(nfa.starts()));
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (std::size_t a = 0; a < symbols; ++a) {
      std::set<StateId> next;
      for (StateId q : subsets[i]) {
        for (const auto& t : nfa.transitions(q)) {
          if (t.symbol == static_cast<SymbolIndex>(a)) next.insert(t.to);
        }
      }
      const StateId target = intern(nfa.epsilon_closure(std::move(next)));
      table.push_back(target);
    }
  }

  std::vector<bool> accepting(subsets.size(), false);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (StateId q : subsets[i]) {
      if (nfa.accepting().count(q)) {
        accepting[i] = true;
        break;
      }
    }
  }
  return Fsa(nfa.alphabet(), subsets.size(), 0, std::move(accepting), std::move(table));
}

}  // namespace pathrules
