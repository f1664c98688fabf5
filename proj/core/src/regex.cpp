#include "pathrules/regex.hpp"

#include <string>

#include "pathrules/error.hpp"

namespace pathrules {
namespace {

struct Fragment {
  StateId in;
  StateId out;
};

// Recursive descent over
//   alternation := concatenation ('|' concatenation)*
//   concatenation := repetition*
//   repetition := atom '*'*
//   atom := symbol | '(' alternation ')'
// emitting Thompson fragments directly into the Nfa.
class ThompsonParser {
 public:
  ThompsonParser(std::string_view pattern, const Alphabet& alphabet)
      : pattern_(pattern), alphabet_(alphabet), nfa_(alphabet) {}

  Nfa run() {
    Fragment f = alternation();
    skip_space();
    if (pos_ != pattern_.size()) fail("unexpected ')'");
    nfa_.add_start(f.in);
    nfa_.set_accepting(f.out);
    return std::move(nfa_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("regex: " + what + " at offset " + std::to_string(pos_) + " in \"" +
                     std::string(pattern_) + "\"");
  }

  void skip_space() {
    while (pos_ < pattern_.size() && (pattern_[pos_] == ' ' || pattern_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ == pattern_.size();
  }

  char peek() {
    skip_space();
    return pos_ < pattern_.size() ? pattern_[pos_] : '\0';
  }

  Fragment epsilon() {
    StateId a = nfa_.add_state();
    StateId b = nfa_.add_state();
    nfa_.add_epsilon(a, b);
    return {a, b};
  }

  Fragment alternation() {
    Fragment left = concatenation();
    while (!at_end() && peek() == '|') {
      ++pos_;
      Fragment right = concatenation();
      StateId in = nfa_.add_state();
      StateId out = nfa_.add_state();
      nfa_.add_epsilon(in, left.in);
      nfa_.add_epsilon(in, right.in);
      nfa_.add_epsilon(left.out, out);
      nfa_.add_epsilon(right.out, out);
      left = {in, out};
    }
    return left;
  }

  Fragment concatenation() {
    std::optional<Fragment> result;
    while (!at_end() && peek() != '|' && peek() != ')') {
      Fragment next = repetition();
      if (result) {
        nfa_.add_epsilon(result->out, next.in);
        result->out = next.out;
      } else {
        result = next;
      }
    }
    return result ? *result : epsilon();
  }

  Fragment repetition() {
    Fragment f = atom();
    while (!at_end() && peek() == '*') {
      ++pos_;
      StateId in = nfa_.add_state();
      StateId out = nfa_.add_state();
      nfa_.add_epsilon(in, f.in);
      nfa_.add_epsilon(in, out);
      nfa_.add_epsilon(f.out, f.in);
      nfa_.add_epsilon(f.out, out);
      f = {in, out};
    }
    return f;
  }

  Fragment atom() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Fragment inner = alternation();
      if (at_end() || peek() != ')') fail("missing ')'");
      ++pos_;
      return inner;
    }
    if (c == '*') fail("'*' without operand");
    if (c == ')') fail("unexpected ')'");
    ++pos_;
    const SymbolIndex a = alphabet_.index(c);
    StateId from = nfa_.add_state();
    StateId to = nfa_.add_state();
    nfa_.add_transition(from, a, to);
    return {from, to};
  }

  std::string_view pattern_;
  const Alphabet& alphabet_;
  Nfa nfa_;
  std::size_t pos_ = 0;
};

}  // namespace

Nfa regex_to_nfa(std::string_view pattern, const Alphabet& alphabet) {
  return ThompsonParser(pattern, alphabet).run();
}

Fsa regex_to_fsa(std::string_view pattern, const Alphabet& alphabet) {
  return minimize(determinize(regex_to_nfa(pattern, alphabet)));
}

}  // namespace pathrules
