#pragma once

// Independent reference implementations used to check the library.

#include <algorithm>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pathrules/fsa.hpp"
#include "pathrules/rng.hpp"
#include "pathrules/rnn.hpp"

namespace oracle {

// Backtracking matcher over a small regex AST: each node maps a start
// position to the set of positions where a match can end.
class RegexMatcher {
 public:
  explicit RegexMatcher(std::string_view pattern) : src_(pattern) {
    root_ = alternation();
    skip();
    if (pos_ != src_.size()) throw std::runtime_error("oracle: trailing input");
  }

  bool matches(std::string_view word) const { return ends(*root_, word, 0).count(word.size()) > 0; }

 private:
  struct Node {
    enum Kind { Sym, Cat, Alt, Star, Eps } kind;
    char symbol = 0;
    std::vector<std::unique_ptr<Node>> kids;
  };
  using Ptr = std::unique_ptr<Node>;

  void skip() {
    while (pos_ < src_.size() && src_[pos_] == ' ') ++pos_;
  }
  char peek() {
    skip();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }
  Ptr make(Node::Kind k) {
    auto n = std::make_unique<Node>();
    n->kind = k;
    return n;
  }
  Ptr alternation() {
    auto n = make(Node::Alt);
    n->kids.push_back(concatenation());
    while (peek() == '|') {
      ++pos_;
      n->kids.push_back(concatenation());
    }
    return n;
  }
  Ptr concatenation() {
    auto n = make(Node::Cat);
    for (char c = peek(); c != '\0' && c != '|' && c != ')'; c = peek()) {
      Ptr atom;
      if (c == '(') {
        ++pos_;
        atom = alternation();
        if (peek() != ')') throw std::runtime_error("oracle: missing )");
        ++pos_;
      } else {
        atom = make(Node::Sym);
        atom->symbol = c;
        ++pos_;
      }
      while (peek() == '*') {
        ++pos_;
        auto star = make(Node::Star);
        star->kids.push_back(std::move(atom));
        atom = std::move(star);
      }
      n->kids.push_back(std::move(atom));
    }
    if (n->kids.empty()) return make(Node::Eps);
    return n;
  }

  std::set<std::size_t> ends(const Node& n, std::string_view w, std::size_t at) const {
    switch (n.kind) {
      case Node::Eps:
        return {at};
      case Node::Sym:
        if (at < w.size() && w[at] == n.symbol) return {at + 1};
        return {};
      case Node::Alt: {
        std::set<std::size_t> out;
        for (const auto& k : n.kids) {
          auto e = ends(*k, w, at);
          out.insert(e.begin(), e.end());
        }
        return out;
      }
      case Node::Cat: {
        std::set<std::size_t> cur{at};
        for (const auto& k : n.kids) {
          std::set<std::size_t> next;
          for (auto p : cur) {
            auto e = ends(*k, w, p);
            next.insert(e.begin(), e.end());
          }
          cur.swap(next);
        }
        return cur;
      }
      case Node::Star: {
        std::set<std::size_t> reached{at};
        std::vector<std::size_t> todo{at};
        while (!todo.empty()) {
          auto p = todo.back();
          todo.pop_back();
          for (auto e : ends(*n.kids[0], w, p)) {
            if (reached.insert(e).second) todo.push_back(e);
          }
        }
        return reached;
      }
    }
    return {};
  }

  std::string src_;
  std::size_t pos_ = 0;
  Ptr root_;
};

// Every word over `symbols` with length in [min_len, max_len].
inline std::vector<std::string> all_words(std::string_view symbols, std::size_t min_len, std::size_t max_len) {
  std::vector<std::string> out;
  std::vector<std::string> layer{""};
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= min_len) out.insert(out.end(), layer.begin(), layer.end());
    std::vector<std::string> next;
    for (const auto& w : layer) {
      for (char c : symbols) next.push_back(w + c);
    }
    layer.swap(next);
  }
  return out;
}

// Direct table walk, independent of Fsa::run.
inline bool walk_accepts(const pathrules::Fsa& f, std::string_view w) {
  std::size_t q = f.start();
  const auto& sym = f.alphabet().symbols();
  for (char c : w) {
    const auto it = std::find(sym.begin(), sym.end(), c);
    if (it == sym.end()) throw std::runtime_error("oracle: foreign symbol");
    q = f.table()[q * sym.size() + static_cast<std::size_t>(it - sym.begin())];
  }
  return f.accepting()[q];
}

// Random complete DFA with n states over the first k letters of "abc",
// start 0, minimized.
inline pathrules::Fsa random_dfa(pathrules::Rng& rng, std::size_t n, std::size_t k) {
  pathrules::Alphabet a(std::string("abc").substr(0, k));
  for (;;) {
    std::vector<bool> acc(n);
    for (std::size_t i = 0; i < n; ++i) acc[i] = rng.below(2) == 1;
    std::vector<pathrules::StateId> tab(n * k);
    for (auto& t : tab) t = static_cast<pathrules::StateId>(rng.below(n));
    auto m = pathrules::minimize(pathrules::Fsa(a, n, 0, acc, tab));
    if (m.state_count() == n) return m;
  }
}

inline std::string random_word(pathrules::Rng& rng, std::string_view symbols, std::size_t min_len,
                               std::size_t max_len) {
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w += symbols[rng.below(symbols.size())];
  return w;
}

// Traces whose "hidden state" is the one-hot vector of the DFA state and
// whose output is 1 on accepting states, 0 otherwise.
inline std::vector<pathrules::TraceRecord> one_hot_traces(const pathrules::Fsa& f,
                                                          const std::vector<std::string>& words) {
  std::vector<pathrules::TraceRecord> out;
  auto vec = [&](pathrules::StateId q) {
    std::vector<double> v(f.state_count(), 0.0);
    v[q] = 1.0;
    return v;
  };
  for (const auto& w : words) {
    pathrules::TraceRecord r;
    r.word = w;
    r.initial_hidden = vec(f.start());
    r.initial_output = f.is_accepting(f.start()) ? 1.0 : 0.0;
    auto q = f.start();
    for (char c : w) {
      q = f.next(q, f.alphabet().index(c));
      r.steps.push_back({c, vec(q), f.is_accepting(q) ? 1.0 : 0.0});
    }
    r.probability = r.steps.empty() ? r.initial_output : r.steps.back().output;
    r.prediction = r.probability > 0.5;
    out.push_back(std::move(r));
  }
  return out;
}

// Same machine with states renumbered by a random permutation.
inline pathrules::Fsa shuffled_copy(const pathrules::Fsa& f, std::uint64_t seed) {
  pathrules::Rng rng(seed);
  const std::size_t n = f.state_count();
  const std::size_t k = f.alphabet().size();
  std::vector<pathrules::StateId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<pathrules::StateId>(i);
  rng.shuffle(perm);
  std::vector<bool> acc(n);
  std::vector<pathrules::StateId> tab(n * k);
  for (std::size_t q = 0; q < n; ++q) {
    acc[perm[q]] = f.is_accepting(static_cast<pathrules::StateId>(q));
    for (std::size_t a = 0; a < k; ++a) tab[perm[q] * k + a] = perm[f.table()[q * k + a]];
  }
  return pathrules::Fsa(f.alphabet(), n, perm[f.start()], acc, tab);
}

}  // namespace oracle
