#pragma once

// Small helpers shared by the line-oriented file readers.

#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathrules/error.hpp"

namespace pathrules::text {

struct Line {
  std::size_t number;  // 1-based
  std::string text;
};

std::string_view trim(std::string_view s);

/// Non-blank lines that do not start with '#', trimmed.
std::vector<Line> content_lines(std::string_view text);

std::vector<std::string> split(std::string_view s);

/// "key: value" -> value (trimmed) when the key matches.
std::optional<std::string> field(std::string_view line, std::string_view key);

template <typename T>
T parse_uint(std::string_view token, std::size_t line_number = 0) {
  T value{};
  token = trim(token);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("line " + std::to_string(line_number) + ": expected a non-negative integer, got '" +
                     std::string(token) + "'");
  }
  return value;
}

double parse_double(std::string_view token, std::size_t line_number = 0);

}  // namespace pathrules::text
