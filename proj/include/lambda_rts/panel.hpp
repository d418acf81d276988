#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lambda_rts/dataset.hpp"
#include "lambda_rts/estimation.hpp"
#include "lambda_rts/lambda_technology.hpp"

namespace lambda_rts {

struct EstimateConfig {
  double epsilon = 1e-6;  ///< classification tolerance band around alpha = 1
  unsigned threads = 0;   ///< 0: LAMBDA_RTS_THREADS env var, then hardware
};

/// Per-unit estimation and scoring results for one period.
struct UnitResult {
  std::string dmu_id;
  AlphaInterval alpha;
  RtsClass rts = RtsClass::CRS_NOT_REJECTED;
  double lambda_star = 0.0;
  double beta_star = 0.0;
  double phi_union = 1.0;   ///< exp(lambda_star): best union score across elasticities
  double phi_global = 1.0;  ///< intersection-technology gauge at the unit
  double phi_vrs = 1.0;
  double phi_crs = 1.0;
};

struct PeriodResult {
  std::string period;
  std::vector<UnitResult> units;  ///< dataset order
  LambdaCollection lambda;
};

struct PanelRun {
  std::vector<PeriodResult> periods;
};

/// Effective worker count: `requested` when nonzero, otherwise the
/// LAMBDA_RTS_THREADS environment variable, otherwise hardware concurrency.
unsigned resolve_thread_cap(unsigned requested);

/// Runs estimation, classification and scoring for every unit of every
/// period. Units are processed data-parallel (results land in dataset order,
/// so output is deterministic regardless of the thread cap).
PanelRun run_panel(const std::vector<Dataset>& periods,
                   const EstimateConfig& cfg = {});

/// Returns-to-scale class counts and shares over a period window.
struct ClassShares {
  std::string window_lo;
  std::string window_hi;
  std::size_t n = 0;
  std::size_t irs = 0;
  std::size_t drs = 0;
  std::size_t crs = 0;
  double irs_share = 0.0;
  double drs_share = 0.0;
  double crs_share = 0.0;
};

/// Shares per window (inclusive period-label ranges, numeric-aware when both
/// bounds parse as numbers). An empty window list means one window per
/// period. Windows that match no rows are omitted, so shares of every
/// returned row sum to 1.
std::vector<ClassShares> summarize_distribution(
    const PanelRun& run,
    const std::vector<std::pair<std::string, std::string>>& windows = {});

/// Numeric-aware label ordering used for periods and window bounds:
/// numbers compare numerically, anything else lexicographically.
bool label_less(const std::string& a, const std::string& b);

}  // namespace lambda_rts
