#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pathrules/fsa.hpp"

namespace pathrules {

// Line-oriented text format:
//
//   fsa v1
//   alphabet: t p s
//   start: 0
//   accept: 0 1
//   0 t 0
//   0 p 1
//   ...
//
// Blank lines and lines starting with '#' are ignored. The state count is
// one more than the largest id mentioned; missing transitions are routed to
// a fresh sink.

std::string write_fsa(const Fsa& fsa);
Fsa read_fsa(std::string_view text);

void save_fsa(const std::filesystem::path& path, const Fsa& fsa);
Fsa load_fsa(const std::filesystem::path& path);

/// Reads a whole file; throws Error when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace pathrules
