#include "pathrules/text.hpp"

#include <cstdlib>
#include <sstream>

namespace pathrules::text {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    auto line = trim(text.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#') out.push_back({number, std::string(line)});
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> split(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::optional<std::string> field(std::string_view line, std::string_view key) {
  line = trim(line);
  if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != ':') {
    return std::nullopt;
  }
  return std::string(trim(line.substr(key.size() + 1)));
}

double parse_double(std::string_view token, std::size_t line_number) {
  std::string s(trim(token));
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError("line " + std::to_string(line_number) + ": expected a number, got '" + s + "'");
  }
  return value;
}

}  // namespace pathrules::text
