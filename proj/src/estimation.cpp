#include "lambda_rts/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lambda_rts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double lower_envelope_at(std::span<const double> f, std::span<const double> g,
                         double beta) {
  double m = kInf;
  if (beta == kInf) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (g[k] == kInf) continue;
      if (f[k] == kInf) continue;  // slack everywhere except beta = 0
      if (f[k] < 0.0) return -kInf;
      if (f[k] == 0.0) m = std::min(m, g[k]);
    }
    return m;
  }
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (g[k] == kInf) continue;
    double c;
    if (f[k] == kInf)
      c = beta == 0.0 ? g[k] : kInf;
    else
      c = g[k] + beta * f[k];
    m = std::min(m, c);
  }
  return m;
}

EnvelopeMax maximize_lower_envelope(std::span<const double> f,
                                    std::span<const double> g) {
  const std::size_t n = f.size();

  std::vector<std::size_t> fin;  // rows with both coefficients finite
  fin.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    if (g[k] != kInf && f[k] != kInf) fin.push_back(k);
  if (fin.empty()) {
    // Nothing binds at any beta > 0: the envelope is +inf on the open ray
    // regardless of its beta = 0 value, so the supremum is +inf.
    return {kInf, BetaInterval{0.0, kInf}};
  }

  bool any_nonpos = false;
  for (std::size_t k : fin)
    if (f[k] <= 0.0) {
      any_nonpos = true;
      break;
    }
  if (!any_nonpos) {
    // Every binding row slopes upward, so the envelope increases without
    // bound; the supremum +inf is approached only as beta -> inf. The
    // degenerate argmax at infinity lets interval-restricted callers fall
    // back to evaluating their finite right endpoint.
    return {kInf, BetaInterval{kInf, kInf}};
  }

  const auto value_at = [&](double b) { return lower_envelope_at(f, g, b); };

  // Height of the lowest flat row: a hard upper bound for the whole envelope,
  // attained exactly whenever the maximum sits on a plateau.
  double flat_cap = kInf;
  for (std::size_t k : fin)
    if (f[k] == 0.0) flat_cap = std::min(flat_cap, g[k]);

  double best = std::max(value_at(0.0), value_at(1.0));
  for (std::size_t a = 0; a < fin.size(); ++a) {
    const std::size_t p = fin[a];
    if (f[p] < 0.0) continue;
    for (std::size_t b = 0; b < fin.size(); ++b) {
      const std::size_t q = fin[b];
      if (f[q] > 0.0 || f[q] == f[p]) continue;
      // slopes satisfy f_p >= 0 >= f_q with f_p > f_q
      const double cross = (g[q] - g[p]) / (f[p] - f[q]);
      if (cross > 0.0 && std::isfinite(cross)) best = std::max(best, value_at(cross));
    }
  }

  double lambda = best;
  if (flat_cap != kInf) {
    // The crossing formula reaches a plateau height only up to subtraction
    // noise; when it gets that close, the plateau height is the exact optimum.
    const double snap = 1e-12 * std::max(1.0, std::fabs(flat_cap));
    if (best >= flat_cap - snap) lambda = flat_cap;
    lambda = std::min(lambda, flat_cap);
  }

  // Argmax as the per-row feasible set at the optimum level.
  double lo = 0.0, hi = kInf;
  for (std::size_t k : fin) {
    if (f[k] > 0.0)
      lo = std::max(lo, (lambda - g[k]) / f[k]);
    else if (f[k] < 0.0)
      hi = std::min(hi, (lambda - g[k]) / f[k]);
  }
  if (lo > hi) {
    // A mathematical singleton can split by one rounding step; collapse it.
    const double width_tol = 1e-9 * std::max(1.0, lo);
    if (lo - hi > width_tol)
      throw std::logic_error("maximize_lower_envelope: inconsistent argmax bounds");
    const double mid = 0.5 * (lo + hi);
    lo = hi = mid;
  }
  return {lambda, BetaInterval{lo, hi}};
}

SolverResult solve_goodness_of_fit(const LogRatioRow& row) {
  if (row.f.size() != row.g.size() || row.j >= row.f.size())
    throw std::invalid_argument("solve_goodness_of_fit: malformed ratio row");

  const EnvelopeMax env = maximize_lower_envelope(row.f, row.g);
  // The unit's own row is (0, 0), so the envelope never exceeds 0.
  if (!(env.lambda_star <= 0.0))
    throw std::logic_error("solve_goodness_of_fit: positive optimum");

  const BetaInterval range = beta_feasible_interval(row, env.lambda_star);
  const double beta =
      range.bounded() ? 0.5 * (range.lo + range.hi) : range.lo;

  SolverResult out;
  out.j = row.j;
  out.lambda_star = env.lambda_star;
  out.beta_star = ExtendedReal(beta);

  const double tol = 1e-9 * std::max(1.0, std::fabs(env.lambda_star));
  for (std::size_t k = 0; k < row.f.size(); ++k) {
    if (row.g[k] == kInf) continue;
    double c;
    if (row.f[k] == kInf)
      c = beta == 0.0 ? row.g[k] : kInf;
    else
      c = row.g[k] + beta * row.f[k];
    if (std::fabs(c - env.lambda_star) <= tol) out.binding.push_back(k);
  }
  return out;
}

BetaInterval beta_feasible_interval(const LogRatioRow& row, double lambda_star) {
  double lo = 0.0, hi = kInf;
  for (std::size_t k = 0; k < row.f.size(); ++k) {
    if (row.g[k] == kInf) continue;
    const double fv = row.f[k], gv = row.g[k];
    if (fv == kInf) continue;  // (lambda - g)/inf contributes the vacuous bound 0
    if (fv > 0.0) {
      lo = std::max(lo, (lambda_star - gv) / fv);
    } else if (fv < 0.0) {
      hi = std::min(hi, (lambda_star - gv) / fv);
    } else if (gv < lambda_star - 1e-9 * std::max(1.0, std::fabs(lambda_star))) {
      throw std::invalid_argument(
          "beta_feasible_interval: lambda_star exceeds a flat row");
    }
  }
  lo = std::max(lo, 0.0);
  if (lo > hi + 1e-9 * std::max(1.0, std::fabs(lo)))
    throw std::invalid_argument(
        "beta_feasible_interval: empty set, lambda_star above the optimum");
  if (hi != kInf && hi - lo < 1e-9) {
    const double mid = std::max(0.0, 0.5 * (lo + hi));
    return BetaInterval{mid, mid};
  }
  return BetaInterval{lo, hi};
}

const char* to_string(RtsClass c) noexcept {
  switch (c) {
    case RtsClass::IRS: return "IRS";
    case RtsClass::DRS: return "DRS";
    case RtsClass::CRS_NOT_REJECTED: return "CRS_NOT_REJECTED";
  }
  return "CRS_NOT_REJECTED";
}

RtsClass classify_rts(const AlphaInterval& interval, double epsilon) {
  if (epsilon < 0.0 || !std::isfinite(epsilon))
    throw std::invalid_argument("classify_rts: epsilon must be finite and >= 0");
  if (interval.lo.value() > 1.0 + epsilon) return RtsClass::IRS;
  if (interval.hi.value() < 1.0 - epsilon) return RtsClass::DRS;
  return RtsClass::CRS_NOT_REJECTED;
}

GridOracleResult oracle_grid_max(const LogRatioRow& row,
                                 const GridOracleOptions& opts) {
  if (opts.grid_points < 3 || !(opts.beta_grid_lo > 0.0) ||
      !(opts.beta_max > opts.beta_grid_lo))
    throw std::invalid_argument("oracle_grid_max: bad grid options");

  // Own evaluation loop on purpose; see header note on independence.
  const auto value_at = [&row](double b) {
    double m = kInf;
    for (std::size_t k = 0; k < row.f.size(); ++k) {
      if (row.g[k] == kInf) continue;
      double c;
      if (row.f[k] == kInf)
        c = b == 0.0 ? row.g[k] : kInf;
      else
        c = row.g[k] + b * row.f[k];
      if (c < m) m = c;
    }
    return m;
  };

  const double llo = std::log(opts.beta_grid_lo);
  const double lhi = std::log(opts.beta_max);
  const std::size_t n = opts.grid_points;
  const auto grid = [&](std::size_t i) {
    return std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                              static_cast<double>(n - 1));
  };

  double best_b = 0.0;
  double best_v = value_at(0.0);
  std::size_t best_i = n;  // n encodes "beta = 0"
  for (std::size_t i = 0; i < n; ++i) {
    const double b = grid(i);
    const double v = value_at(b);
    if (v > best_v) {
      best_v = v;
      best_b = b;
      best_i = i;
    }
  }

  // Bracket the incumbent between its grid neighbours and refine. The
  // envelope is concave on (0, inf), so golden-section converges to the
  // global maximum over the bracket.
  double a = 0.0, c = opts.beta_max;
  if (best_i == n) {
    c = grid(0);
  } else {
    a = best_i == 0 ? 0.0 : grid(best_i - 1);
    c = best_i + 1 < n ? grid(best_i + 1) : opts.beta_max;
  }
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = c - inv_phi * (c - a);
  double x2 = a + inv_phi * (c - a);
  double v1 = value_at(x1), v2 = value_at(x2);
  for (int it = 0; it < 200 && c - a > 1e-15 * std::max(1.0, c); ++it) {
    if (v1 < v2) {
      a = x1;
      x1 = x2;
      v1 = v2;
      x2 = a + inv_phi * (c - a);
      v2 = value_at(x2);
    } else {
      c = x2;
      x2 = x1;
      v2 = v1;
      x1 = c - inv_phi * (c - a);
      v1 = value_at(x1);
    }
    if (v1 > best_v) { best_v = v1; best_b = x1; }
    if (v2 > best_v) { best_v = v2; best_b = x2; }
  }

  GridOracleResult out;
  out.lambda_star = best_v;
  out.beta_star = best_b;
  out.unbounded_argmax = false;
  if (best_i + 1 >= n && best_i != n) {
    const double edge = value_at(opts.beta_max);
    const double inside = value_at(opts.beta_max * (1.0 - 1e-6));
    if (edge >= inside - 1e-12) {
      out.unbounded_argmax = true;
      out.beta_star = opts.beta_max;
      out.lambda_star = std::max(best_v, edge);
    }
  }
  return out;
}

}  // namespace lambda_rts
