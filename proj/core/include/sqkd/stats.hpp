#pragma once

// Observable channel statistics shared by the attack-analysis and key-rate
// modules.

#include <array>

#include "sqkd/tolerances.hpp"

namespace sqkd {

// p_a[i][j]: probability that Bob's Z measurement yields |j> given Alice sent
// |i>. p_b[i][j]: probability that Bob's X measurement yields the j-th X
// state given he originally sent the i-th, with index 0 = |+> and 1 = |->.
// Each row is a complete distribution.
struct ChannelStats {
  std::array<std::array<double, 2>, 2> p_a{};
  std::array<std::array<double, 2>, 2> p_b{};

  static ChannelStats noiseless() {
    return ChannelStats{{{{1.0, 0.0}, {0.0, 1.0}}}, {{{1.0, 0.0}, {0.0, 1.0}}}};
  }

  // Throws std::domain_error if entries leave [0,1] or a row does not sum to
  // 1 within tol.constraint.
  void validate(const Tolerances& tol = default_tolerances()) const;
};

}  // namespace sqkd
