#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "lambda_rts/dataset.hpp"
#include "lambda_rts/extended_real.hpp"
#include "lambda_rts/intervals.hpp"

namespace lambda_rts {

// ---------------------------------------------------------------------------
// Input-oriented efficiency against a single unit's alpha-scaled technology.
//
// The technology spanned by unit k under elasticity alpha is the smallest
// free-disposal set containing every rescaling (lambda^{1/alpha} x_k,
// lambda y_k). The Farrell input measure of (x, y) against it has the closed
// form
//
//   phi = [output_reach_ratio(y, y_k)]^{1/alpha} * input_reach_ratio(x, x_k)
//
// for finite alpha > 0. The boundary elasticities keep their limit meaning:
// alpha = +inf scales output freely (score: input reach ratio, provided y's
// support is contained in y_k's), alpha = 0 scales input freely below the
// observed output level.
// ---------------------------------------------------------------------------

/// Farrell input measure of (x, y) in unit k's technology; +inf when the
/// point is unreachable at that elasticity. Infeasibility is a score, never
/// an exception. alpha spans [0, +inf].
ExtendedReal phi_k(const Dataset& d, std::size_t k, std::span<const double> x,
                   std::span<const double> y, ExtendedReal alpha);

/// ln phi_k, computed without forming the (possibly overflowing) linear
/// value. Range [-inf, +inf].
double log_phi_k(const Dataset& d, std::size_t k, std::span<const double> x,
                 std::span<const double> y, ExtendedReal alpha);

/// Farrell output measure of (x, y) in unit k's technology; 0 when no
/// expansion is feasible. Defined for finite alpha > 0 only; the boundary
/// elasticities have no output-oriented limit and throw std::domain_error.
ExtendedReal psi_k(const Dataset& d, std::size_t k, std::span<const double> x,
                   std::span<const double> y, double alpha);

/// Input measure against the union over all units (the generalized
/// free-disposal hull at elasticity alpha): min over k of phi_k.
ExtendedReal phi_union(const Dataset& d, std::span<const double> x,
                       std::span<const double> y, ExtendedReal alpha);
double log_phi_union(const Dataset& d, std::span<const double> x,
                     std::span<const double> y, ExtendedReal alpha);

/// (x, y) lies in unit k's technology iff no input contraction is needed.
bool member_q_alpha(const Dataset& d, std::size_t k, std::span<const double> x,
                    std::span<const double> y, ExtendedReal alpha);

// ---------------------------------------------------------------------------
// Non-convex FDH technologies under a scaling regime Gamma: unit k spans
// { (x, y) : x >= delta x_k, y <= delta y_k, delta in Gamma }.
// ---------------------------------------------------------------------------

enum class GammaRegime {
  CRS,   ///< delta >= 0
  NDRS,  ///< delta >= 1
  NIRS,  ///< 0 <= delta <= 1
  VRS,   ///< delta = 1
};

/// Input measure of (x, y) against unit k's Gamma-regime technology. The
/// smallest admissible delta that still reaches y is delta_min =
/// output_reach_ratio(y, y_k); the score is delta* * input_reach_ratio(x, x_k)
/// where delta* is the smallest element of Gamma above delta_min, or +inf
/// when Gamma has none.
ExtendedReal fdh_input_efficiency_vs(const Dataset& d, std::size_t k,
                                     std::span<const double> x,
                                     std::span<const double> y, GammaRegime regime);

/// min over k of fdh_input_efficiency_vs; +inf when every unit is infeasible.
/// Under CRS this equals phi_union at alpha = 1 exactly (same arithmetic).
ExtendedReal fdh_input_efficiency(const Dataset& d, std::span<const double> x,
                                  std::span<const double> y, GammaRegime regime);

bool member_q_gamma(const Dataset& d, std::size_t k, std::span<const double> x,
                    std::span<const double> y, GammaRegime regime);

// ---------------------------------------------------------------------------
// Technology selector for report and CLI layers.
// ---------------------------------------------------------------------------

struct IndividualTech {
  std::size_t k;
  ExtendedReal alpha;
};
struct UnionTech {
  ExtendedReal alpha;
};
struct GammaTech {
  GammaRegime regime;
};
/// Intersection technology over a finite union of elasticity intervals.
struct GlobalLambdaTech {
  std::vector<AlphaInterval> support;
};

using TechnologySpec =
    std::variant<IndividualTech, UnionTech, GammaTech, GlobalLambdaTech>;

}  // namespace lambda_rts
