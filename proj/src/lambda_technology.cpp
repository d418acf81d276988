#include "lambda_rts/lambda_technology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lambda_rts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BetaInterval beta_image(const AlphaInterval& a) {
  return BetaInterval{a.hi.reciprocal().value(), a.lo.reciprocal().value()};
}

/// Exact sup of the constraint envelope over a union of beta intervals:
/// the unconstrained argmax either meets an interval (sup is the global
/// maximum) or lies beyond one of its ends (concavity makes the envelope
/// monotone there, so the nearer endpoint attains the restricted sup).
double sup_over_images(std::span<const double> f, std::span<const double> g,
                       const EnvelopeMax& env, std::span<const BetaInterval> images) {
  double best = -kInf;
  for (const auto& im : images) {
    double v;
    if (env.argmax.lo <= im.hi && im.lo <= env.argmax.hi)
      v = env.lambda_star;
    else if (im.hi < env.argmax.lo)
      v = lower_envelope_at(f, g, im.hi);
    else
      v = lower_envelope_at(f, g, im.lo);
    best = std::max(best, v);
  }
  return best;
}

std::vector<BetaInterval> beta_images(const std::vector<AlphaInterval>& support) {
  std::vector<BetaInterval> out;
  out.reserve(support.size());
  for (const auto& a : support) out.push_back(beta_image(a));
  return out;
}

/// y scaled along an alpha ray: y * lambda^alpha with the boundary meanings
/// (alpha = 0 leaves output fixed, alpha = +inf leaves input fixed and scales
/// output directly). Returns false when the scale is not representable.
bool scale_point_on_ray(const ProductionUnit& u, ExtendedReal alpha, double lam,
                        std::vector<double>& x, std::vector<double>& y) {
  double xscale, yscale;
  if (alpha.infinite()) {
    xscale = 1.0;
    yscale = lam;
  } else if (alpha.zero()) {
    xscale = lam;
    yscale = 1.0;
  } else {
    const double t = alpha.value() * std::log(lam);
    if (std::fabs(t) > 500.0) return false;
    xscale = lam;
    yscale = std::exp(t);
  }
  x.assign(u.inputs.begin(), u.inputs.end());
  y.assign(u.outputs.begin(), u.outputs.end());
  for (auto& v : x) v *= xscale;
  for (auto& v : y) v *= yscale;
  return true;
}

}  // namespace

std::vector<AlphaInterval> normalize_support(std::vector<AlphaInterval> intervals) {
  if (intervals.empty()) return intervals;
  std::sort(intervals.begin(), intervals.end(),
            [](const AlphaInterval& a, const AlphaInterval& b) {
              if (a.lo != b.lo) return a.lo < b.lo;
              return a.hi < b.hi;
            });
  std::vector<AlphaInterval> merged;
  merged.push_back(intervals.front());
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    const auto& next = intervals[i];
    if (next.lo <= merged.back().hi) {
      if (merged.back().hi < next.hi) merged.back().hi = next.hi;
    } else {
      merged.push_back(next);
    }
  }
  return merged;
}

LambdaCollection aggregate_lambda(std::vector<AlphaInterval> per_dmu) {
  if (per_dmu.empty())
    throw std::invalid_argument("aggregate_lambda: no per-unit intervals");
  LambdaCollection lc;
  lc.global_lo = ExtendedReal::infinity();
  lc.global_hi = ExtendedReal(0.0);
  for (const auto& a : per_dmu) {
    lc.global_lo = std::min(lc.global_lo, a.lo);
    lc.global_hi = std::max(lc.global_hi, a.hi);
  }
  lc.support = normalize_support(per_dmu);
  lc.per_dmu = std::move(per_dmu);
  return lc;
}

LambdaCollection lambda_star(const Dataset& d) {
  std::vector<AlphaInterval> per_dmu;
  per_dmu.reserve(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    const LogRatioRow row = log_ratio_row(d, j);
    const SolverResult sol = solve_goodness_of_fit(row);
    per_dmu.push_back(alpha_interval(beta_feasible_interval(row, sol.lambda_star)));
  }
  return aggregate_lambda(std::move(per_dmu));
}

double log_phi_global(const Dataset& d, const LambdaCollection& lc,
                      std::span<const double> x, std::span<const double> y) {
  if (lc.support.empty())
    throw std::invalid_argument("log_phi_global: empty elasticity support");
  const PointLogRatios pr = point_log_ratios(d, x, y);
  const EnvelopeMax env = maximize_lower_envelope(pr.f, pr.g);
  const auto images = beta_images(lc.support);
  return sup_over_images(pr.f, pr.g, env, images);
}

ExtendedReal phi_global(const Dataset& d, const LambdaCollection& lc,
                        std::span<const double> x, std::span<const double> y) {
  return ext_exp(log_phi_global(d, lc, x, y));
}

bool member_global(const Dataset& d, const LambdaCollection& lc,
                   std::span<const double> x, std::span<const double> y) {
  return log_phi_global(d, lc, x, y) <= 0.0;
}

double log_phi_extrapolation(const Dataset& d, const LambdaCollection& lc,
                             ExtrapolationSide side, std::span<const double> x,
                             std::span<const double> y) {
  if (lc.per_dmu.empty())
    throw std::invalid_argument("log_phi_extrapolation: empty collection");
  const PointLogRatios pr = point_log_ratios(d, x, y);
  double best = -kInf;
  for (const auto& a : lc.per_dmu) {
    const ExtendedReal alpha = side == ExtrapolationSide::Lower ? a.lo : a.hi;
    best = std::max(best,
                    lower_envelope_at(pr.f, pr.g, alpha.reciprocal().value()));
  }
  return best;
}

ExtendedReal phi_extrapolation(const Dataset& d, const LambdaCollection& lc,
                               ExtrapolationSide side, std::span<const double> x,
                               std::span<const double> y) {
  return ext_exp(log_phi_extrapolation(d, lc, side, x, y));
}

RationalizationReport check_rationalization(const Dataset& d) {
  return check_rationalization(d, lambda_star(d));
}

RationalizationReport check_rationalization(const Dataset& d,
                                            const LambdaCollection& lc) {
  RationalizationReport rep;
  rep.all_units_member = true;

  // (a) containment and (b) gauge agreement with the per-unit fit optimum.
  std::vector<double> lam(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    const auto& u = d.unit(j);
    lam[j] = solve_goodness_of_fit(log_ratio_row(d, j)).lambda_star;
    const double lg = log_phi_global(d, lc, u.inputs, u.outputs);
    if (lg > 0.0) rep.all_units_member = false;
    rep.worst_gauge_gap =
        std::max(rep.worst_gauge_gap, std::fabs(std::exp(lg) - std::exp(lam[j])));
  }
  rep.gauge_matches_solver = rep.worst_gauge_gap <= 1e-9;

  // (c) endpoint shaving relaxes the gauge everywhere it is checked.
  const auto images = beta_images(lc.support);
  struct Shave {
    double beta;
    std::vector<BetaInterval> images;
    ExtendedReal alpha;  // endpoint in alpha terms, for probe rays
  };
  std::vector<Shave> shaves;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (int side = 0; side < 2; ++side) {
      const bool upper = side == 1;
      if (images[i].singleton() && upper) continue;  // one shave covers both ends
      std::vector<BetaInterval> sh = images;
      const double e = upper ? images[i].hi : images[i].lo;
      BetaInterval cut = images[i];
      if (upper)
        cut.hi = cut.hi == kInf ? 1e12 : cut.hi * (1.0 - 1e-6);
      else
        cut.lo = cut.lo == 0.0 ? 1e-12 : cut.lo * (1.0 + 1e-6);
      if (cut.lo > cut.hi)
        sh.erase(sh.begin() + static_cast<std::ptrdiff_t>(i));
      else
        sh[i] = cut;
      shaves.push_back({e, std::move(sh), ExtendedReal(e).reciprocal()});
    }
  }

  std::vector<double> px, py;
  for (const auto& sh : shaves) {
    EndpointProbe probe{sh.beta, true, false, 0.0};
    const double lam_grid[] = {0.25, 0.5, 2.0, 4.0};
    for (std::size_t j = 0; j < d.size(); ++j) {
      for (int gi = -1; gi < static_cast<int>(std::size(lam_grid)); ++gi) {
        if (gi < 0) {
          px.assign(d.unit(j).inputs.begin(), d.unit(j).inputs.end());
          py.assign(d.unit(j).outputs.begin(), d.unit(j).outputs.end());
        } else if (!scale_point_on_ray(d.unit(j), sh.alpha,
                                       lam_grid[gi], px, py)) {
          continue;
        }
        const PointLogRatios pr = point_log_ratios(d, px, py);
        const EnvelopeMax env = maximize_lower_envelope(pr.f, pr.g);
        const double full = sup_over_images(pr.f, pr.g, env, images);
        const double shaved =
            sh.images.empty() ? -kInf
                              : sup_over_images(pr.f, pr.g, env, sh.images);
        if (shaved > full + 1e-12) {
          probe.weak_ok = false;
          probe.max_violation = std::max(probe.max_violation, shaved - full);
        }
        if (shaved < full - 1e-9) probe.strict_drop = true;
      }
    }
    rep.endpoints.push_back(std::move(probe));
  }
  return rep;
}

std::vector<MinimalityFinding> minimality_probe(const Dataset& d,
                                                const std::vector<ExtendedReal>& alphas,
                                                std::size_t probe_budget) {
  std::vector<MinimalityFinding> out;
  if (alphas.empty()) return out;

  // Multiplicative scan grid on both sides of 1.
  std::vector<double> lam_grid;
  for (double l : {0.125, 0.25, 0.5, 0.75, 1.5, 2.0, 4.0, 8.0}) lam_grid.push_back(l);

  std::vector<double> px, py, qx;
  for (std::size_t m = 0; m < alphas.size(); ++m) {
    MinimalityFinding finding;
    finding.dropped_index = m;
    std::vector<ExtendedReal> rest;
    for (std::size_t i = 0; i < alphas.size(); ++i)
      if (i != m) rest.push_back(alphas[i]);

    std::vector<ExtendedReal> rays = rest;
    if (rays.empty()) rays.push_back(alphas[m]);

    std::size_t used = 0;
    for (std::size_t k = 0; k < d.size() && !finding.witness_found; ++k) {
      for (const ExtendedReal& ray : rays) {
        if (finding.witness_found || used >= probe_budget) break;
        for (double lam : lam_grid) {
          if (used >= probe_budget) break;
          ++used;
          if (!scale_point_on_ray(d.unit(k), ray, lam, px, py)) continue;

          // Gauge of the probe in the technology without the dropped element;
          // empty remainder imposes nothing.
          double lg_rest = -kInf;
          for (const ExtendedReal& a : rest)
            lg_rest = std::max(lg_rest, log_phi_union(d, px, py, a));
          double scale;
          if (lg_rest == -kInf)
            scale = 1.0;  // anything is a member; probe as-is
          else if (!std::isfinite(lg_rest))
            continue;
          else
            scale = std::exp(lg_rest);
          if (!(scale > 0.0) || !std::isfinite(scale)) continue;

          qx.assign(px.begin(), px.end());
          for (auto& v : qx) v *= scale;  // now on the remainder's frontier

          const double lg_dropped = log_phi_union(d, qx, py, alphas[m]);
          if (lg_dropped > 1e-9) {
            finding.witness_found = true;
            finding.x = qx;
            finding.y = py;
            finding.gauge_remaining = lg_rest == -kInf ? 0.0 : 1.0;
            finding.gauge_dropped = std::exp(std::min(lg_dropped, 700.0));
            break;
          }
        }
      }
    }
    out.push_back(std::move(finding));
  }
  return out;
}

ExtendedReal input_efficiency(const Dataset& d, const TechnologySpec& spec,
                              std::span<const double> x, std::span<const double> y) {
  return std::visit(
      [&](const auto& t) -> ExtendedReal {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, IndividualTech>) {
          return phi_k(d, t.k, x, y, t.alpha);
        } else if constexpr (std::is_same_v<T, UnionTech>) {
          return phi_union(d, x, y, t.alpha);
        } else if constexpr (std::is_same_v<T, GammaTech>) {
          return fdh_input_efficiency(d, x, y, t.regime);
        } else {
          LambdaCollection lc;
          lc.support = normalize_support(t.support);
          if (lc.support.empty())
            throw std::invalid_argument("input_efficiency: empty support");
          return phi_global(d, lc, x, y);
        }
      },
      spec);
}

}  // namespace lambda_rts
