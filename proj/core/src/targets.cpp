#include "pathrules/targets.hpp"

namespace pathrules {

Fsa security_target() {
  return Fsa::from_edges(Alphabet(kSecurityAlphabet), 3, 0, {0, 1},
                         {{0, 't', 0}, {0, 'p', 1}, {0, 's', 2},
                          {1, 't', 1}, {1, 'p', 1}, {1, 's', 1},
                          {2, 't', 2}, {2, 'p', 2}, {2, 's', 2}});
}

}  // namespace pathrules
