#include "pathrules/fsa.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include "pathrules/error.hpp"

namespace pathrules {
namespace {

constexpr StateId kUnset = std::numeric_limits<StateId>::max();

// Breadth-first distances from the start state (kUnset when unreachable).
std::vector<std::size_t> bfs_depths(const Fsa& fsa) {
  std::vector<std::size_t> depth(fsa.state_count(), std::numeric_limits<std::size_t>::max());
  std::deque<StateId> queue{fsa.start()};
  depth[fsa.start()] = 0;
  const auto symbols = fsa.alphabet().size();
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < symbols; ++a) {
      StateId r = fsa.next(q, static_cast<SymbolIndex>(a));
      if (depth[r] == std::numeric_limits<std::size_t>::max()) {
        depth[r] = depth[q] + 1;
        queue.push_back(r);
      }
    }
  }
  return depth;
}

}  // namespace

Fsa::Fsa(Alphabet alphabet, std::size_t state_count, StateId start, std::vector<bool> accepting,
         std::vector<StateId> transitions)
    : alphabet_(std::move(alphabet)),
      start_(start),
      accepting_(std::move(accepting)),
      table_(std::move(transitions)) {
  if (alphabet_.size() == 0) throw InvalidArgument("fsa: empty alphabet");
  if (state_count == 0) throw InvalidArgument("fsa: no states");
  if (start_ >= state_count) throw InvalidArgument("fsa: start state out of range");
  if (accepting_.size() != state_count) throw InvalidArgument("fsa: accepting vector size mismatch");
  if (table_.size() != state_count * alphabet_.size()) {
    throw InvalidArgument("fsa: transition table is not total");
  }
  for (StateId t : table_) {
    if (t >= state_count) throw InvalidArgument("fsa: transition target out of range");
  }
}

Fsa Fsa::from_edges(Alphabet alphabet, std::size_t state_count, StateId start,
                    const std::vector<StateId>& accepting, const std::vector<Edge>& edges) {
  const std::size_t symbols = alphabet.size();
  std::vector<StateId> table(state_count * symbols, kUnset);
  for (const auto& e : edges) {
    if (e.from >= state_count || e.to >= state_count) {
      throw InvalidArgument("fsa: edge endpoint out of range");
    }
    auto& slot = table[e.from * symbols + alphabet.index(e.symbol)];
    if (slot != kUnset && slot != e.to) {
      throw InvalidArgument("fsa: nondeterministic edge on state " + std::to_string(e.from));
    }
    slot = e.to;
  }
  std::vector<bool> acc(state_count, false);
  for (StateId q : accepting) {
    if (q >= state_count) throw InvalidArgument("fsa: accepting state out of range");
    acc[q] = true;
  }
  if (std::find(table.begin(), table.end(), kUnset) != table.end()) {
    const auto sink = static_cast<StateId>(state_count);
    for (auto& t : table) {
      if (t == kUnset) t = sink;
    }
    table.insert(table.end(), symbols, sink);
    acc.push_back(false);
    ++state_count;
  }
  return Fsa(std::move(alphabet), state_count, start, std::move(acc), std::move(table));
}

std::vector<StateId> Fsa::accepting_states() const {
  std::vector<StateId> out;
  for (std::size_t q = 0; q < accepting_.size(); ++q) {
    if (accepting_[q]) out.push_back(static_cast<StateId>(q));
  }
  return out;
}

StateId Fsa::run_from(StateId q, std::string_view word) const {
  for (char c : word) q = next(q, alphabet_.index(c));
  return q;
}

Fsa canonicalize(const Fsa& fsa) {
  const std::size_t symbols = fsa.alphabet().size();
  std::vector<StateId> order;
  std::vector<StateId> rename(fsa.state_count(), kUnset);
  rename[fsa.start()] = 0;
  order.push_back(fsa.start());
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t a = 0; a < symbols; ++a) {
      StateId r = fsa.next(order[head], static_cast<SymbolIndex>(a));
      if (rename[r] == kUnset) {
        rename[r] = static_cast<StateId>(order.size());
        order.push_back(r);
      }
    }
  }
  std::vector<bool> acc(order.size());
  std::vector<StateId> table(order.size() * symbols);
  for (std::size_t i = 0; i < order.size(); ++i) {
    acc[i] = fsa.is_accepting(order[i]);
    for (std::size_t a = 0; a < symbols; ++a) {
      table[i * symbols + a] = rename[fsa.next(order[i], static_cast<SymbolIndex>(a))];
    }
  }
  return Fsa(fsa.alphabet(), order.size(), 0, std::move(acc), std::move(table));
}

// Moore-style partition refinement on the reachable part.
Fsa minimize(const Fsa& input) {
  const Fsa fsa = canonicalize(input);
  const std::size_t n = fsa.state_count();
  const std::size_t symbols = fsa.alphabet().size();

  std::vector<StateId> block(n);
  for (std::size_t q = 0; q < n; ++q) block[q] = fsa.is_accepting(static_cast<StateId>(q)) ? 1 : 0;
  std::size_t block_count = 0;
  for (;;) {
    std::map<std::vector<StateId>, StateId> signatures;
    std::vector<StateId> refined(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<StateId> sig;
      sig.reserve(symbols + 1);
      sig.push_back(block[q]);
      for (std::size_t a = 0; a < symbols; ++a) {
        sig.push_back(block[fsa.next(static_cast<StateId>(q), static_cast<SymbolIndex>(a))]);
      }
      auto [it, inserted] = signatures.emplace(std::move(sig), static_cast<StateId>(signatures.size()));
      refined[q] = it->second;
    }
    block.swap(refined);
    if (signatures.size() == block_count) break;
    block_count = signatures.size();
  }

  std::vector<bool> acc(block_count, false);
  std::vector<StateId> table(block_count * symbols);
  for (std::size_t q = 0; q < n; ++q) {
    const StateId b = block[q];
    acc[b] = fsa.is_accepting(static_cast<StateId>(q));
    for (std::size_t a = 0; a < symbols; ++a) {
      table[b * symbols + a] = block[fsa.next(static_cast<StateId>(q), static_cast<SymbolIndex>(a))];
    }
  }
  return canonicalize(Fsa(fsa.alphabet(), block_count, block[fsa.start()], std::move(acc), std::move(table)));
}

bool isomorphic(const Fsa& a, const Fsa& b) {
  if (!(a.alphabet() == b.alphabet())) return false;
  return canonicalize(a) == canonicalize(b);
}

bool equivalent(const Fsa& a, const Fsa& b) { return isomorphic(minimize(a), minimize(b)); }

bool language_empty(const Fsa& fsa) { return !shortest_accepted_length(fsa).has_value(); }

std::optional<std::size_t> shortest_accepted_length(const Fsa& fsa) {
  const auto depth = bfs_depths(fsa);
  std::optional<std::size_t> best;
  for (std::size_t q = 0; q < fsa.state_count(); ++q) {
    if (fsa.is_accepting(static_cast<StateId>(q)) && depth[q] != std::numeric_limits<std::size_t>::max()) {
      if (!best || depth[q] < *best) best = depth[q];
    }
  }
  return best;
}

std::optional<std::size_t> shortest_nonempty_accepted_length(const Fsa& fsa) {
  // BFS over (state, "has read at least one symbol").
  const std::size_t n = fsa.state_count();
  const std::size_t symbols = fsa.alphabet().size();
  std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
  std::deque<StateId> queue;
  for (std::size_t a = 0; a < symbols; ++a) {
    StateId r = fsa.next(fsa.start(), static_cast<SymbolIndex>(a));
    if (dist[r] == std::numeric_limits<std::size_t>::max()) {
      dist[r] = 1;
      queue.push_back(r);
    }
  }
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    if (fsa.is_accepting(q)) return dist[q];
    for (std::size_t a = 0; a < symbols; ++a) {
      StateId r = fsa.next(q, static_cast<SymbolIndex>(a));
      if (dist[r] == std::numeric_limits<std::size_t>::max()) {
        dist[r] = dist[q] + 1;
        queue.push_back(r);
      }
    }
  }
  return std::nullopt;
}

std::string to_dot(const Fsa& fsa, std::string_view graph_name) {
  std::ostringstream out;
  out << "digraph " << graph_name << " {\n";
  out << "  rankdir=LR;\n";
  out << "  __start [shape=point];\n";
  for (std::size_t q = 0; q < fsa.state_count(); ++q) {
    out << "  q" << q << " [label=\"" << q << "\", shape="
        << (fsa.is_accepting(static_cast<StateId>(q)) ? "doublecircle" : "circle") << "];\n";
  }
  out << "  __start -> q" << fsa.start() << ";\n";
  const auto& alphabet = fsa.alphabet();
  for (std::size_t q = 0; q < fsa.state_count(); ++q) {
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      out << "  q" << q << " -> q" << fsa.next(static_cast<StateId>(q), static_cast<SymbolIndex>(a))
          << " [label=\"" << alphabet.symbol(a) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace pathrules
