#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lambda_rts/extended_real.hpp"
#include "lambda_rts/intervals.hpp"
#include "lambda_rts/log_ratios.hpp"

namespace lambda_rts {

// ---------------------------------------------------------------------------
// Scale-fit estimation for one unit.
//
// Given a unit's log reach ratios (f_k, g_k) against every unit k, the fit
// program maximizes lambda subject to lambda <= beta * f_k + g_k over
// beta >= 0. Its optimum exp(lambda*) is the unit's best attainable union
// efficiency across all elasticities, and the set of maximizing betas maps to
// the unit's admissible elasticity interval.
//
// Conventions for infinite coefficients, applied consistently everywhere the
// objective is evaluated: rows with g = +inf never bind; rows with f = +inf
// bind only at beta = 0, where they contribute g.
// ---------------------------------------------------------------------------

/// Objective value min_k(beta * f_k + g_k) at a point beta in [0, +inf].
/// beta = +inf is the limit value: -inf as soon as some finite row has f < 0,
/// otherwise the smallest g among rows with f = 0 (+inf when none exist).
double lower_envelope_at(std::span<const double> f, std::span<const double> g,
                         double beta);

struct EnvelopeMax {
  double lambda_star;   ///< sup of the envelope over beta >= 0 (+inf iff no row binds)
  BetaInterval argmax;  ///< closed set of maximizing betas
};

/// Exact maximum of the concave piecewise-linear envelope over beta >= 0.
///
/// Candidates are beta = 0, beta = 1 and every pairwise crossing of finite
/// rows with slopes f_p >= 0 >= f_q; at a maximum the active slope changes
/// sign, so the meeting pair always appears among these. When the best
/// candidate sits within rounding of the lowest zero-slope row, the optimum
/// is that row's g exactly and is returned without the subtraction noise of
/// the crossing formula.
EnvelopeMax maximize_lower_envelope(std::span<const double> f,
                                    std::span<const double> g);

struct SolverResult {
  std::size_t j = 0;
  double lambda_star = 0.0;          ///< always <= 0; 0 iff the unit is on the fitted frontier
  ExtendedReal beta_star;            ///< a maximizer: midpoint of a bounded argmax, else its finite endpoint
  std::vector<std::size_t> binding;  ///< rows active at beta_star
};

SolverResult solve_goodness_of_fit(const LogRatioRow& row);

/// Closed set {beta >= 0 : beta * f_k + g_k >= lambda_star for all k},
/// assembled from the per-row closed forms
///   f > 0:  beta >= (lambda - g) / f
///   f < 0:  beta <= (lambda - g) / f
///   f = 0:  g >= lambda must already hold.
/// Widths below 1e-9 collapse to the midpoint singleton. Throws
/// std::invalid_argument when lambda_star exceeds the envelope maximum.
BetaInterval beta_feasible_interval(const LogRatioRow& row, double lambda_star);

enum class RtsClass {
  IRS,               ///< alpha interval strictly above 1
  DRS,               ///< alpha interval strictly below 1
  CRS_NOT_REJECTED,  ///< interval touches 1 within the tolerance band
};

const char* to_string(RtsClass c) noexcept;

/// IRS when lo > 1 + epsilon, DRS when hi < 1 - epsilon, else constant
/// returns cannot be rejected.
RtsClass classify_rts(const AlphaInterval& interval, double epsilon = 1e-6);

// ---------------------------------------------------------------------------
// Brute-force check of the exact maximizer. Deliberately shares no code with
// maximize_lower_envelope: a log-spaced scan plus golden-section refinement
// of the best bracket, so disagreement beyond tolerance indicts one of the
// two paths.
// ---------------------------------------------------------------------------

struct GridOracleOptions {
  double beta_max = 1e6;
  double beta_grid_lo = 1e-9;      ///< log spacing cannot reach 0; 0 is scanned explicitly
  std::size_t grid_points = 100000;
};

struct GridOracleResult {
  double lambda_star;
  double beta_star;
  bool unbounded_argmax;  ///< incumbent at beta_max with numerically nonnegative slope
};

GridOracleResult oracle_grid_max(const LogRatioRow& row,
                                 const GridOracleOptions& opts = {});

}  // namespace lambda_rts
