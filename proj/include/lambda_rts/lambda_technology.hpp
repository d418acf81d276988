#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lambda_rts/dataset.hpp"
#include "lambda_rts/efficiency.hpp"
#include "lambda_rts/estimation.hpp"
#include "lambda_rts/intervals.hpp"

namespace lambda_rts {

// ---------------------------------------------------------------------------
// The estimated elasticity support of a dataset: per-unit admissible alpha
// intervals and their normalized union. The intersection, over every alpha in
// that union, of the per-alpha union technologies is the tightest technology
// in the family that still contains all observed units, and the per-unit fit
// optima are exactly its efficiency scores at the data.
// ---------------------------------------------------------------------------

struct LambdaCollection {
  std::vector<AlphaInterval> per_dmu;   ///< indexed like the dataset
  std::vector<AlphaInterval> support;   ///< disjoint, sorted, merged union
  ExtendedReal global_lo;               ///< min over units of interval lo
  ExtendedReal global_hi;               ///< max over units of interval hi
};

/// Sorts, merges overlapping or touching closed intervals, returns a disjoint
/// cover of the same set.
std::vector<AlphaInterval> normalize_support(std::vector<AlphaInterval> intervals);

/// Aggregates per-unit intervals into a collection (pure, no estimation).
LambdaCollection aggregate_lambda(std::vector<AlphaInterval> per_dmu);

/// Full estimation pass: solve the fit program for every unit, map the
/// maximizing beta sets to alpha intervals, aggregate.
LambdaCollection lambda_star(const Dataset& d);

/// Input gauge of (x, y) against the intersection technology: the supremum
/// over the support of the per-alpha union score, evaluated exactly by
/// maximizing the constraint envelope over each beta image of the support.
ExtendedReal phi_global(const Dataset& d, const LambdaCollection& lc,
                        std::span<const double> x, std::span<const double> y);
double log_phi_global(const Dataset& d, const LambdaCollection& lc,
                      std::span<const double> x, std::span<const double> y);

/// Membership in the intersection technology (gauge at most 1).
bool member_global(const Dataset& d, const LambdaCollection& lc,
                   std::span<const double> x, std::span<const double> y);

enum class ExtrapolationSide { Lower, Upper };

/// Extrapolation gauge built from one endpoint per unit: the max over units j
/// of the union score at unit j's lower (resp. upper) admissible elasticity.
ExtendedReal phi_extrapolation(const Dataset& d, const LambdaCollection& lc,
                               ExtrapolationSide side, std::span<const double> x,
                               std::span<const double> y);
double log_phi_extrapolation(const Dataset& d, const LambdaCollection& lc,
                             ExtrapolationSide side, std::span<const double> x,
                             std::span<const double> y);

// ---------------------------------------------------------------------------
// Diagnostics.
// ---------------------------------------------------------------------------

/// One probed support endpoint: shaving it off must not shrink any gauge
/// (removing an elasticity can only enlarge the intersection technology).
/// strict_drop records whether some probe saw the gauge strictly fall, i.e.
/// the endpoint is load-bearing.
struct EndpointProbe {
  double beta;           ///< endpoint in beta space
  bool weak_ok;          ///< no probe saw the gauge rise after shaving
  bool strict_drop;      ///< some probe saw it strictly fall
  double max_violation;  ///< largest observed rise (should be ~0)
};

struct RationalizationReport {
  bool all_units_member = false;
  double worst_gauge_gap = 0.0;  ///< max over units of |phi_global - exp(lambda*)|
  bool gauge_matches_solver = false;
  std::vector<EndpointProbe> endpoints;

  bool passed() const {
    if (!all_units_member || !gauge_matches_solver) return false;
    for (const auto& e : endpoints)
      if (!e.weak_ok) return false;
    return true;
  }
};

/// Verifies that the estimated collection rationalizes the data: every unit
/// is a member, the intersection gauge at each unit reproduces its fit
/// optimum within 1e-9, and endpoint shaving only ever relaxes the gauge.
RationalizationReport check_rationalization(const Dataset& d);
RationalizationReport check_rationalization(const Dataset& d,
                                            const LambdaCollection& lc);

/// Result of probing whether one element of a finite elasticity set is
/// essential: a point inside the technology built without it but outside the
/// full intersection, when one could be found within the probe budget.
struct MinimalityFinding {
  std::size_t dropped_index = 0;
  bool witness_found = false;
  std::vector<double> x, y;      ///< witness point (empty when none found)
  double gauge_remaining = 0.0;  ///< gauge without the dropped element (<= 1)
  double gauge_dropped = 0.0;    ///< union gauge at the dropped elasticity (> 1)
};

/// For each element of `alphas`, searches scaled-frontier probes for a
/// witness that dropping it strictly enlarges the intersection technology.
/// No witness within the budget is reported as inconclusive, not as proof.
std::vector<MinimalityFinding> minimality_probe(const Dataset& d,
                                                const std::vector<ExtendedReal>& alphas,
                                                std::size_t probe_budget = 256);

/// Farrell input measure against any technology the suite can describe.
ExtendedReal input_efficiency(const Dataset& d, const TechnologySpec& spec,
                              std::span<const double> x, std::span<const double> y);

}  // namespace lambda_rts
