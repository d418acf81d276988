#include "lambda_rts/panel.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <thread>

#include "lambda_rts/efficiency.hpp"

namespace lambda_rts {

namespace {

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  double v = 0.0;
  auto [p, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || p != end) return std::nullopt;
  return v;
}

bool label_leq(const std::string& a, const std::string& b) {
  return !label_less(b, a);
}

UnitResult estimate_unit(const Dataset& d, std::size_t j, double epsilon) {
  const LogRatioRow row = log_ratio_row(d, j);
  const SolverResult sol = solve_goodness_of_fit(row);
  const BetaInterval brange = beta_feasible_interval(row, sol.lambda_star);
  const AlphaInterval arange = alpha_interval(brange);

  const auto& u = d.unit(j);
  UnitResult r;
  r.dmu_id = u.id;
  r.alpha = arange;
  r.rts = classify_rts(arange, epsilon);
  r.lambda_star = sol.lambda_star;
  r.beta_star = sol.beta_star.value();
  r.phi_union = std::exp(sol.lambda_star);
  r.phi_vrs = fdh_input_efficiency(d, u.inputs, u.outputs, GammaRegime::VRS).value();
  r.phi_crs = fdh_input_efficiency(d, u.inputs, u.outputs, GammaRegime::CRS).value();
  return r;
}

}  // namespace

bool label_less(const std::string& a, const std::string& b) {
  const auto na = parse_number(a);
  const auto nb = parse_number(b);
  if (na && nb) return *na < *nb;
  return a < b;
}

unsigned resolve_thread_cap(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LAMBDA_RTS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

PanelRun run_panel(const std::vector<Dataset>& periods, const EstimateConfig& cfg) {
  const unsigned cap = resolve_thread_cap(cfg.threads);
  PanelRun run;
  run.periods.reserve(periods.size());

  for (const Dataset& d : periods) {
    PeriodResult pr;
    pr.period = d.unit(0).period;
    pr.units.resize(d.size());

    const unsigned workers =
        std::min<unsigned>(cap, static_cast<unsigned>(d.size()));
    if (workers <= 1) {
      for (std::size_t j = 0; j < d.size(); ++j)
        pr.units[j] = estimate_unit(d, j, cfg.epsilon);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t j = next.fetch_add(1); j < d.size();
               j = next.fetch_add(1))
            pr.units[j] = estimate_unit(d, j, cfg.epsilon);
        });
      }
      for (auto& t : pool) t.join();
    }

    std::vector<AlphaInterval> per_dmu;
    per_dmu.reserve(d.size());
    for (const auto& u : pr.units) per_dmu.push_back(u.alpha);
    pr.lambda = aggregate_lambda(std::move(per_dmu));

    for (std::size_t j = 0; j < d.size(); ++j) {
      const auto& u = d.unit(j);
      pr.units[j].phi_global =
          phi_global(d, pr.lambda, u.inputs, u.outputs).value();
    }
    run.periods.push_back(std::move(pr));
  }
  return run;
}

std::vector<ClassShares> summarize_distribution(
    const PanelRun& run,
    const std::vector<std::pair<std::string, std::string>>& windows) {
  std::vector<std::pair<std::string, std::string>> spans = windows;
  if (spans.empty()) {
    for (const auto& p : run.periods) spans.emplace_back(p.period, p.period);
  }

  std::vector<ClassShares> out;
  for (const auto& [lo, hi] : spans) {
    ClassShares s;
    s.window_lo = lo;
    s.window_hi = hi;
    for (const auto& p : run.periods) {
      if (!(label_leq(lo, p.period) && label_leq(p.period, hi))) continue;
      for (const auto& u : p.units) {
        ++s.n;
        switch (u.rts) {
          case RtsClass::IRS: ++s.irs; break;
          case RtsClass::DRS: ++s.drs; break;
          case RtsClass::CRS_NOT_REJECTED: ++s.crs; break;
        }
      }
    }
    if (s.n == 0) continue;
    const double n = static_cast<double>(s.n);
    s.irs_share = static_cast<double>(s.irs) / n;
    s.drs_share = static_cast<double>(s.drs) / n;
    s.crs_share = static_cast<double>(s.crs) / n;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace lambda_rts
