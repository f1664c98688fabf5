#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pathrules::cli {

/// Exit status: 0 success, 1 when a requested artifact could not be
/// produced, 2 on a usage error. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pathrules::cli
