#include "lambda_rts/efficiency.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "lambda_rts/log_ratios.hpp"

namespace lambda_rts {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ExtendedReal phi_k(const Dataset& d, std::size_t k, std::span<const double> x,
                   std::span<const double> y, ExtendedReal alpha) {
  const auto& u = d.unit(k);
  const ExtendedReal ry = output_reach_ratio(y, u.outputs);
  const ExtendedReal rx = input_reach_ratio(x, u.inputs);  // throws on empty x support

  if (alpha.infinite()) {
    // Output scales freely; only the input side and output mix matter.
    return ry.infinite() ? ExtendedReal::infinity() : rx;
  }
  if (alpha.zero()) {
    // Input scales freely strictly below the unit's output level.
    if (ry < ExtendedReal(1.0)) return ExtendedReal(0.0);
    if (ry == ExtendedReal(1.0)) return rx;
    return ExtendedReal::infinity();
  }
  if (ry.zero()) return ExtendedReal(0.0);  // nothing to produce
  if (ry.infinite() || rx.infinite()) return ExtendedReal::infinity();
  return ext_mul(ext_pow(ry, 1.0 / alpha.value()), rx);
}

double log_phi_k(const Dataset& d, std::size_t k, std::span<const double> x,
                 std::span<const double> y, ExtendedReal alpha) {
  const auto& u = d.unit(k);
  const ExtendedReal ry = output_reach_ratio(y, u.outputs);
  const ExtendedReal rx = input_reach_ratio(x, u.inputs);

  if (alpha.infinite()) return ry.infinite() ? kInf : ext_log(rx);
  if (alpha.zero()) {
    if (ry < ExtendedReal(1.0)) return -kInf;
    if (ry == ExtendedReal(1.0)) return ext_log(rx);
    return kInf;
  }
  if (ry.zero()) return -kInf;
  if (ry.infinite() || rx.infinite()) return kInf;
  return ext_log(ry) / alpha.value() + ext_log(rx);
}

ExtendedReal psi_k(const Dataset& d, std::size_t k, std::span<const double> x,
                   std::span<const double> y, double alpha) {
  if (!(alpha > 0.0) || alpha == kInf)
    throw std::domain_error(
        "psi_k: output measure is defined for finite positive alpha only");
  const auto& u = d.unit(k);

  bool x_has_support = false;
  double mx = kInf;  // min over the support of x of x_i / x_{k,i}
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) {
      x_has_support = true;
      if (u.inputs[i] > 0.0) mx = std::min(mx, x[i] / u.inputs[i]);
    } else if (u.inputs[i] > 0.0) {
      return ExtendedReal(0.0);  // unit k needs an input the point lacks
    }
  }
  if (!x_has_support)
    throw std::domain_error("psi_k: input vector has empty support");

  bool y_has_support = false;
  double my = kInf;  // min over the support of y of y_{k,h} / y_h
  for (std::size_t h = 0; h < y.size(); ++h) {
    if (y[h] > 0.0) {
      y_has_support = true;
      my = std::min(my, u.outputs[h] / y[h]);
    }
  }
  if (!y_has_support)
    throw std::domain_error("psi_k: output vector has empty support");

  if (my == 0.0) return ExtendedReal(0.0);
  return ext_mul(ExtendedReal(my), ext_pow(ExtendedReal(mx), alpha));
}

ExtendedReal phi_union(const Dataset& d, std::span<const double> x,
                       std::span<const double> y, ExtendedReal alpha) {
  ExtendedReal best = ExtendedReal::infinity();
  for (std::size_t k = 0; k < d.size(); ++k)
    best = std::min(best, phi_k(d, k, x, y, alpha));
  return best;
}

double log_phi_union(const Dataset& d, std::span<const double> x,
                     std::span<const double> y, ExtendedReal alpha) {
  double best = kInf;
  for (std::size_t k = 0; k < d.size(); ++k)
    best = std::min(best, log_phi_k(d, k, x, y, alpha));
  return best;
}

bool member_q_alpha(const Dataset& d, std::size_t k, std::span<const double> x,
                    std::span<const double> y, ExtendedReal alpha) {
  return phi_k(d, k, x, y, alpha) <= ExtendedReal(1.0);
}

ExtendedReal fdh_input_efficiency_vs(const Dataset& d, std::size_t k,
                                     std::span<const double> x,
                                     std::span<const double> y, GammaRegime regime) {
  const auto& u = d.unit(k);
  const ExtendedReal delta_min = output_reach_ratio(y, u.outputs);
  const ExtendedReal rx = input_reach_ratio(x, u.inputs);
  if (delta_min.infinite() || rx.infinite()) return ExtendedReal::infinity();

  const ExtendedReal one(1.0);
  switch (regime) {
    case GammaRegime::CRS:
      return ext_mul(delta_min, rx);
    case GammaRegime::NDRS:
      return ext_mul(std::max(delta_min, one), rx);
    case GammaRegime::NIRS:
      return delta_min <= one ? ext_mul(delta_min, rx) : ExtendedReal::infinity();
    case GammaRegime::VRS:
      return delta_min <= one ? rx : ExtendedReal::infinity();
  }
  throw std::logic_error("fdh_input_efficiency_vs: unknown regime");
}

ExtendedReal fdh_input_efficiency(const Dataset& d, std::span<const double> x,
                                  std::span<const double> y, GammaRegime regime) {
  ExtendedReal best = ExtendedReal::infinity();
  for (std::size_t k = 0; k < d.size(); ++k)
    best = std::min(best, fdh_input_efficiency_vs(d, k, x, y, regime));
  return best;
}

bool member_q_gamma(const Dataset& d, std::size_t k, std::span<const double> x,
                    std::span<const double> y, GammaRegime regime) {
  return fdh_input_efficiency_vs(d, k, x, y, regime) <= ExtendedReal(1.0);
}

}  // namespace lambda_rts
