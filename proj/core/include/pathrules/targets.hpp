#pragma once

#include <string_view>

#include "pathrules/fsa.hpp"

namespace pathrules {

/// Labels of the security analysis: t = transparent block, p = permission
/// check, s = security-sensitive call.
inline constexpr std::string_view kSecurityAlphabet = "tps";

/// A path is secure when no security call happens before the first
/// permission check.
inline constexpr std::string_view kSecurityPattern = "t*|t*p(t|p|s)*";

/// Three-state machine: 0 loops on t and is accepting, p leads to the
/// accepting absorbing state 1, s leads to the rejecting sink 2.
Fsa security_target();

}  // namespace pathrules
