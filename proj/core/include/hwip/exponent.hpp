#pragma once

#include "hwip/errors.hpp"

#include <cmath>
#include <string>

namespace hwip {

/// Moment order p > 2 and the matching Hoelder exponent alpha = 1/2 - 1/p.
struct HolderExponent {
  double p;
  double alpha;

  static HolderExponent from_p(double p) {
    if (!(p > 2.0) || !std::isfinite(p))
      throw InvalidArgument("moment order p must be a finite real > 2, got " + std::to_string(p));
    return HolderExponent{p, 0.5 - 1.0 / p};
  }
};

}  // namespace hwip
