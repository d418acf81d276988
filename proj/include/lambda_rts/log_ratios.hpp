#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lambda_rts/dataset.hpp"
#include "lambda_rts/extended_real.hpp"

namespace lambda_rts {

/// Indices of the strictly positive components of v (its support).
std::vector<std::size_t> carrier(std::span<const double> v);

/// max over idx of num[i]/den[i], with num>0/0 contributing +inf and 0/0
/// skipped. Throws std::domain_error when idx is empty: a maximum over
/// nothing has no meaning here and silently returning a default would hide
/// caller bugs.
ExtendedReal ratio_max(std::span<const double> num, std::span<const double> den,
                       const std::vector<std::size_t>& idx);

/// Smallest output scale of unit k that weakly dominates y:
/// max over the support of y of y_h / y_{k,h}. Equals 0 when y = 0 (no output
/// to reach) and +inf when k lacks an output that y requires.
ExtendedReal output_reach_ratio(std::span<const double> y, std::span<const double> yk);

/// Smallest uniform contraction of x that still weakly dominates x_k:
/// max over the support of x of x_{k,i} / x_i. Equals +inf when k consumes an
/// input that x does not have (no contraction of x can cover it). Throws
/// std::domain_error when x has empty support.
ExtendedReal input_reach_ratio(std::span<const double> x, std::span<const double> xk);

/// Per-unit log reach ratios of an evaluation point against every unit k:
///   f_k = ln output_reach_ratio(y, y_k),   g_k = ln input_reach_ratio(x, x_k).
/// f_k lies in (-inf, +inf] (and is -inf only for y = 0); g_k lies in
/// (-inf, +inf] with +inf marking unreachability. These are the constraint
/// coefficients of the scale-fit program: lambda <= beta * f_k + g_k.
struct PointLogRatios {
  std::vector<double> f;
  std::vector<double> g;
};

/// The same row evaluated at an observed unit j. The self entries are exact
/// zeros by IEEE division (y/y = 1, log(1) = 0), which pins lambda* <= 0.
struct LogRatioRow {
  std::size_t j = 0;
  std::vector<double> f;
  std::vector<double> g;
};

PointLogRatios point_log_ratios(const Dataset& d, std::span<const double> x,
                                std::span<const double> y);
LogRatioRow log_ratio_row(const Dataset& d, std::size_t j);

}  // namespace lambda_rts
