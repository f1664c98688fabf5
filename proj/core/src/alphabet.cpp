#include "pathrules/alphabet.hpp"

#include <algorithm>
#include <sstream>

#include "pathrules/error.hpp"

namespace pathrules {

Alphabet::Alphabet(std::string_view symbols) {
  for (char c : symbols) {
    if (std::find(symbols_.begin(), symbols_.end(), c) != symbols_.end()) {
      throw InvalidArgument(std::string("duplicate alphabet symbol '") + c + "'");
    }
    if (c == '(' || c == ')' || c == '|' || c == '*' || c == ' ' || c == '\t' ||
        c == '\n' || c == '\r') {
      throw InvalidArgument(std::string("reserved character in alphabet: '") + c + "'");
    }
    symbols_.push_back(c);
  }
  if (symbols_.empty()) throw InvalidArgument("alphabet must not be empty");
  if (symbols_.size() > 255) throw InvalidArgument("alphabet too large");
}

Alphabet::Alphabet(std::initializer_list<char> symbols)
    : Alphabet(std::string_view(std::string(symbols.begin(), symbols.end()))) {}

std::optional<SymbolIndex> Alphabet::find(char c) const noexcept {
  auto it = std::find(symbols_.begin(), symbols_.end(), c);
  if (it == symbols_.end()) return std::nullopt;
  return static_cast<SymbolIndex>(it - symbols_.begin());
}

SymbolIndex Alphabet::index(char c) const {
  if (auto i = find(c)) return *i;
  throw UnknownSymbol(c);
}

std::vector<SymbolIndex> Alphabet::encode(std::string_view word) const {
  std::vector<SymbolIndex> out;
  out.reserve(word.size());
  for (char c : word) out.push_back(index(c));
  return out;
}

std::string Alphabet::decode(const std::vector<SymbolIndex>& indices) const {
  std::string out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(symbol(i));
  return out;
}

std::string Alphabet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (i) out.push_back(' ');
    out.push_back(symbols_[i]);
  }
  return out;
}

Alphabet Alphabet::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string token;
  std::string symbols;
  while (in >> token) {
    if (token.size() != 1) throw ParseError("alphabet symbols must be single characters: '" + token + "'");
    symbols.push_back(token[0]);
  }
  try {
    return Alphabet(std::string_view(symbols));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace pathrules
