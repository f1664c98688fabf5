#pragma once

#include <stdexcept>
#include <string>

namespace pathrules {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input: regex patterns, FSA/ASM/dataset/model files.
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(char symbol)
      : Error(std::string("unknown symbol '") + symbol + "'"), symbol_(symbol) {}
  char symbol() const noexcept { return symbol_; }

 private:
  char symbol_;
};

/// A request that cannot be satisfied by the inputs (too few words, empty
/// sample set, unreachable node, ...).
class InfeasibleRequest : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace pathrules
