#pragma once

#include <string_view>

#include "pathrules/alphabet.hpp"
#include "pathrules/fsa.hpp"
#include "pathrules/nfa.hpp"

namespace pathrules {

// Supported syntax: alphabet symbols, concatenation, '|', postfix '*' and
// parentheses. Whitespace is ignored. An empty alternative ("a|" or "()")
// denotes the empty word.

/// Thompson construction. Throws ParseError or UnknownSymbol.
Nfa regex_to_nfa(std::string_view pattern, const Alphabet& alphabet);

/// Thompson construction, subset construction, then minimization.
Fsa regex_to_fsa(std::string_view pattern, const Alphabet& alphabet);

}  // namespace pathrules
