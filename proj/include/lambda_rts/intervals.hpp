#pragma once

#include <limits>

#include "lambda_rts/extended_real.hpp"

namespace lambda_rts {

/// Closed interval of reciprocal elasticities beta = 1/alpha, beta >= 0.
/// hi = +inf encodes an argmax ray.
struct BetaInterval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool bounded() const noexcept { return hi != std::numeric_limits<double>::infinity(); }
  bool singleton() const noexcept { return lo == hi; }
  bool contains(double b) const noexcept { return b >= lo && b <= hi; }
};

/// Closed interval of scale elasticities alpha on [0, +inf], lo <= hi.
struct AlphaInterval {
  ExtendedReal lo;
  ExtendedReal hi;

  bool singleton() const noexcept { return lo == hi; }
  bool contains(ExtendedReal a) const noexcept { return lo <= a && a <= hi; }
};

/// Maps a beta interval to the alpha interval it supports:
/// alpha_lo = 1/beta_hi, alpha_hi = 1/beta_lo, with 1/0 = +inf and 1/inf = 0.
inline AlphaInterval alpha_interval(const BetaInterval& b) {
  return AlphaInterval{ExtendedReal(b.hi).reciprocal(), ExtendedReal(b.lo).reciprocal()};
}

}  // namespace lambda_rts
