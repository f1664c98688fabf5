#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pathrules {

/// Index of a symbol inside its Alphabet (also the one-hot position).
using SymbolIndex = std::uint8_t;

/// Ordered set of single-character edge labels. The order is fixed at
/// construction and defines symbol indices.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string_view symbols);
  Alphabet(std::initializer_list<char> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  char symbol(std::size_t index) const { return symbols_.at(index); }
  const std::vector<char>& symbols() const noexcept { return symbols_; }

  std::optional<SymbolIndex> find(char c) const noexcept;
  /// Throws UnknownSymbol.
  SymbolIndex index(char c) const;
  bool contains(char c) const noexcept { return find(c).has_value(); }

  /// Maps every character to its index; throws UnknownSymbol.
  std::vector<SymbolIndex> encode(std::string_view word) const;
  std::string decode(const std::vector<SymbolIndex>& indices) const;

  /// Symbols joined by single spaces, as used in the file headers.
  std::string to_string() const;
  /// Inverse of to_string(); whitespace separated single characters.
  static Alphabet parse(std::string_view text);

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<char> symbols_;
};

}  // namespace pathrules
