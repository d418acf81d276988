#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>

namespace lambda_rts {

/// A value on the nonnegative extended half-line [0, +inf].
///
/// Efficiency scores, scale elasticities and their reciprocals all live on
/// this set, and the conventions a/0 = +inf (a > 0), 1/inf = 0 and 1/0 = +inf
/// keep every operation closed. NaN is rejected at construction, so instances
/// form a total order.
class ExtendedReal {
 public:
  constexpr ExtendedReal() noexcept : v_(0.0) {}

  ExtendedReal(double v) : v_(v) {  // NOLINT: implicit by design, validates
    if (std::isnan(v) || v < 0.0)
      throw std::invalid_argument("ExtendedReal: value must lie in [0, +inf]");
  }

  static constexpr ExtendedReal infinity() noexcept {
    return ExtendedReal(std::numeric_limits<double>::infinity(), unchecked{});
  }

  constexpr double value() const noexcept { return v_; }
  constexpr bool infinite() const noexcept {
    return v_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool finite() const noexcept { return !infinite(); }
  constexpr bool zero() const noexcept { return v_ == 0.0; }

  /// 1/v with 1/0 = +inf and 1/inf = 0.
  constexpr ExtendedReal reciprocal() const noexcept {
    if (v_ == 0.0) return infinity();
    if (infinite()) return ExtendedReal(0.0, unchecked{});
    return ExtendedReal(1.0 / v_, unchecked{});
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) noexcept {
    return a.v_ == b.v_;
  }
  friend constexpr std::strong_ordering operator<=>(ExtendedReal a,
                                                    ExtendedReal b) noexcept {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  struct unchecked {};
  constexpr ExtendedReal(double v, unchecked) noexcept : v_(v) {}
  double v_;
};

/// num/den under the a/0 = +inf convention; 0/0 is taken as 0 so that it never
/// contributes to a maximum. Negative arguments are a caller bug.
inline ExtendedReal ext_ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? ExtendedReal(0.0) : ExtendedReal::infinity();
  return ExtendedReal(num / den);
}

/// Natural log extended by ln(0) = -inf and ln(+inf) = +inf.
inline double ext_log(ExtendedReal v) noexcept {
  if (v.zero()) return -std::numeric_limits<double>::infinity();
  if (v.infinite()) return std::numeric_limits<double>::infinity();
  return std::log(v.value());
}

/// exp onto [0, +inf]: -inf maps to 0, overflow saturates to +inf.
inline ExtendedReal ext_exp(double t) noexcept {
  if (t == -std::numeric_limits<double>::infinity()) return ExtendedReal();
  if (t == std::numeric_limits<double>::infinity()) return ExtendedReal::infinity();
  return ExtendedReal(std::exp(t));  // std::exp saturates to +inf on overflow
}

/// v^e for strictly positive finite exponents: 0^e = 0, inf^e = inf.
inline ExtendedReal ext_pow(ExtendedReal v, double e) {
  if (!(e > 0.0) || std::isinf(e))
    throw std::domain_error("ext_pow: exponent must be finite and positive");
  if (v.zero() || v.infinite()) return v;
  return ExtendedReal(std::pow(v.value(), e));
}

/// Product closed over [0, +inf]; 0 * inf cannot occur for reach ratios
/// (both factors are strictly positive or the score is already decided), but
/// the convention 0 * inf = 0 keeps the operation total.
inline ExtendedReal ext_mul(ExtendedReal a, ExtendedReal b) noexcept {
  if (a.zero() || b.zero()) return ExtendedReal();
  if (a.infinite() || b.infinite()) return ExtendedReal::infinity();
  return ExtendedReal(a.value() * b.value());
}

}  // namespace lambda_rts
