#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lambda_rts/lambda_technology.hpp"
#include "lambda_rts/panel.hpp"
#include "lambda_rts/report_io.hpp"

namespace lr = lambda_rts;

namespace {

// Exit codes: 0 success, 1 rejected rows under --strict, 2 unusable
// invocation or I/O failure.

int write_to(const std::string& path, const std::function<void(std::ostream&)>& emit) {
  if (path.empty() || path == "-") {
    emit(std::cout);
    std::cout.flush();
    return 0;
  }
  std::ofstream os(path);
  if (!os) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return 2;
  }
  emit(os);
  os.flush();
  if (!os) {
    std::cerr << "error: write to '" << path << "' failed\n";
    return 2;
  }
  return 0;
}

bool json_path(const std::string& path) {
  auto dot = path.rfind('.');
  if (dot == std::string::npos) return false;
  std::string ext = path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == "json";
}

lr::PanelRun load_report(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return json_path(path) ? lr::parse_report_json(is) : lr::parse_report_csv(is);
}

void log_rejects(const std::vector<lr::RejectedRow>& rejected) {
  for (const auto& r : rejected) {
    std::cerr << "rejected line " << r.line;
    if (!r.id.empty()) {
      std::cerr << " (dmu " << r.id;
      if (!r.period.empty()) std::cerr << ", period " << r.period;
      std::cerr << ')';
    }
    std::cerr << ": " << r.reason << '\n';
  }
}

struct EstimateArgs {
  std::string input, output, format = "csv", period;
  double epsilon = 1e-6;
  bool strict = false;
  unsigned threads = 0;
};

int run_estimate(const EstimateArgs& a) {
  lr::IngestResult ing = lr::ingest_csv_file(a.input);
  log_rejects(ing.rejected);
  if (a.strict && !ing.rejected.empty()) {
    std::cerr << "error: " << ing.rejected.size() << " row(s) rejected under --strict\n";
    return 1;
  }
  std::vector<lr::Dataset> periods = std::move(ing.periods);
  if (!a.period.empty()) {
    std::erase_if(periods,
                  [&](const lr::Dataset& d) { return d.unit(0).period != a.period; });
    if (periods.empty())
      std::cerr << "warning: no rows for period '" << a.period << "'\n";
  }
  lr::EstimateConfig cfg;
  cfg.epsilon = a.epsilon;
  cfg.threads = a.threads;
  const lr::PanelRun run = lr::run_panel(periods, cfg);
  return write_to(a.output, [&](std::ostream& os) {
    if (a.format == "json")
      lr::emit_report_json(run, os);
    else
      lr::emit_report_csv(run, os);
  });
}

struct EfficiencyArgs {
  std::string input, points, output, technology, alpha_text, unit, period, run;
  bool strict = false;
};

int run_efficiency(const EfficiencyArgs& a) {
  lr::IngestResult ing = lr::ingest_csv_file(a.input);
  log_rejects(ing.rejected);
  if (a.strict && !ing.rejected.empty()) {
    std::cerr << "error: " << ing.rejected.size() << " row(s) rejected under --strict\n";
    return 1;
  }
  if (ing.periods.empty()) {
    std::cerr << "error: no usable rows in '" << a.input << "'\n";
    return 2;
  }
  const lr::Dataset* d = nullptr;
  if (!a.period.empty()) {
    for (const auto& ds : ing.periods)
      if (ds.unit(0).period == a.period) d = &ds;
    if (!d) {
      std::cerr << "error: no period '" << a.period << "' in the panel\n";
      return 2;
    }
  } else if (ing.periods.size() == 1) {
    d = &ing.periods.front();
  } else {
    std::cerr << "error: panel has " << ing.periods.size()
              << " periods; pick one with --period\n";
    return 2;
  }

  lr::TechnologySpec spec = lr::UnionTech{lr::ExtendedReal(1.0)};
  auto need_alpha = [&]() -> std::optional<lr::ExtendedReal> {
    if (a.alpha_text.empty()) {
      std::cerr << "error: --technology " << a.technology << " requires --alpha\n";
      return std::nullopt;
    }
    const double av = lr::parse_score(a.alpha_text);
    if (!(av >= 0.0)) {
      std::cerr << "error: --alpha must be nonnegative (or 'inf')\n";
      return std::nullopt;
    }
    return lr::ExtendedReal(av);
  };

  if (a.technology == "union") {
    auto alpha = need_alpha();
    if (!alpha) return 2;
    spec = lr::UnionTech{*alpha};
  } else if (a.technology == "individual") {
    auto alpha = need_alpha();
    if (!alpha) return 2;
    if (a.unit.empty()) {
      std::cerr << "error: --technology individual requires --unit\n";
      return 2;
    }
    std::size_t k = d->size();
    for (std::size_t i = 0; i < d->size(); ++i)
      if (d->unit(i).id == a.unit) {
        k = i;
        break;
      }
    if (k == d->size()) {
      std::cerr << "error: no unit '" << a.unit << "' in the selected period\n";
      return 2;
    }
    spec = lr::IndividualTech{k, *alpha};
  } else if (a.technology == "crs") {
    spec = lr::GammaTech{lr::GammaRegime::CRS};
  } else if (a.technology == "ndrs") {
    spec = lr::GammaTech{lr::GammaRegime::NDRS};
  } else if (a.technology == "nirs") {
    spec = lr::GammaTech{lr::GammaRegime::NIRS};
  } else if (a.technology == "vrs") {
    spec = lr::GammaTech{lr::GammaRegime::VRS};
  } else {  // global
    std::vector<lr::AlphaInterval> support;
    if (!a.run.empty()) {
      const lr::PanelRun saved = load_report(a.run);
      const lr::PeriodResult* pr = nullptr;
      for (const auto& p : saved.periods)
        if (p.period == d->unit(0).period) pr = &p;
      if (!pr && saved.periods.size() == 1 && a.period.empty())
        pr = &saved.periods.front();
      if (!pr) {
        std::cerr << "error: saved run '" << a.run << "' has no period '"
                  << d->unit(0).period << "'\n";
        return 2;
      }
      support = pr->lambda.support;
    } else {
      support = lr::lambda_star(*d).support;
    }
    spec = lr::GlobalLambdaTech{std::move(support)};
  }

  std::vector<lr::PointRow> pts;
  if (a.points.empty()) {
    for (const auto& u : d->units()) pts.push_back({u.id, u.inputs, u.outputs});
  } else {
    std::ifstream is(a.points);
    if (!is) {
      std::cerr << "error: cannot open '" << a.points << "'\n";
      return 2;
    }
    auto res = lr::read_points_csv(is, ing.input_names, ing.output_names);
    log_rejects(res.rejected);
    if (a.strict && !res.rejected.empty()) {
      std::cerr << "error: " << res.rejected.size()
                << " point(s) rejected under --strict\n";
      return 1;
    }
    pts = std::move(res.points);
  }

  return write_to(a.output, [&](std::ostream& os) {
    os << "id,score,member\n";
    for (const auto& p : pts) {
      const lr::ExtendedReal score = lr::input_efficiency(*d, spec, p.x, p.y);
      os << lr::csv_field(p.id) << ',' << lr::format_score(score.value()) << ','
         << (score <= lr::ExtendedReal(1.0) ? "true" : "false") << '\n';
    }
  });
}

struct SummarizeArgs {
  std::string report, output, windows_text;
};

int run_summarize(const SummarizeArgs& a) {
  const lr::PanelRun run = load_report(a.report);
  std::vector<std::pair<std::string, std::string>> windows;
  if (!a.windows_text.empty()) {
    std::size_t pos = 0;
    while (pos <= a.windows_text.size()) {
      const std::size_t semi = a.windows_text.find(';', pos);
      std::string token = a.windows_text.substr(
          pos, semi == std::string::npos ? std::string::npos : semi - pos);
      if (token.empty())
        throw std::runtime_error("empty window in --windows (expected 'lo:hi;lo:hi')");
      const std::size_t colon = token.find(':');
      if (colon == std::string::npos)
        windows.emplace_back(token, token);
      else
        windows.emplace_back(token.substr(0, colon), token.substr(colon + 1));
      if (semi == std::string::npos) break;
      pos = semi + 1;
    }
  }
  const auto shares = lr::summarize_distribution(run, windows);
  return write_to(a.output,
                  [&](std::ostream& os) { lr::emit_summary_csv(shares, os); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"per-unit scale elasticity intervals and efficiency scores for "
               "observed production data"};
  app.set_version_flag("--version", "lambda-rts 1.0.0");
  app.require_subcommand(1);

  EstimateArgs est;
  auto* cmd_est = app.add_subcommand(
      "estimate", "estimate elasticity intervals and scores for a panel CSV");
  cmd_est->add_option("-i,--input", est.input, "panel CSV (dmu_id[,period],x_*,y_*)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_est->add_option("-o,--output", est.output, "report path ('-' = stdout)");
  cmd_est->add_option("--format", est.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd_est->add_option("--epsilon", est.epsilon,
                      "half-width of the band around 1 treated as constant returns")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd_est->add_option("--period", est.period, "estimate only this period label");
  cmd_est->add_option("--threads", est.threads,
                      "worker cap (0: LAMBDA_RTS_THREADS, then hardware)");
  cmd_est->add_flag("--strict", est.strict, "exit 1 when any input row is rejected");

  EfficiencyArgs eff;
  auto* cmd_eff = app.add_subcommand(
      "efficiency", "score points against a technology built from a panel");
  cmd_eff->add_option("-i,--input", eff.input, "panel CSV defining the technology")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_eff->add_option("--points", eff.points,
                      "points CSV (columns matching the panel's x_*/y_*); "
                      "default: the panel's own units")
      ->check(CLI::ExistingFile);
  cmd_eff
      ->add_option("--technology", eff.technology,
                   "one of union|individual|crs|ndrs|nirs|vrs|global")
      ->required()
      ->check(CLI::IsMember({"union", "individual", "crs", "ndrs", "nirs", "vrs", "global"}));
  cmd_eff->add_option("--alpha", eff.alpha_text,
                      "scale elasticity for union/individual (number or 'inf')");
  cmd_eff->add_option("--unit", eff.unit, "unit id for --technology individual");
  cmd_eff->add_option("--period", eff.period, "period label (required for multi-period panels)");
  cmd_eff->add_option("--run", eff.run,
                      "saved report supplying the global support (else re-estimated)")
      ->check(CLI::ExistingFile);
  cmd_eff->add_option("-o,--output", eff.output, "scores CSV ('-' = stdout)");
  cmd_eff->add_flag("--strict", eff.strict, "exit 1 when any row or point is rejected");

  SummarizeArgs sum;
  auto* cmd_sum = app.add_subcommand(
      "summarize", "returns-to-scale class shares per period or period window");
  cmd_sum->add_option("--report", sum.report, "saved report (CSV or JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_sum->add_option("--windows", sum.windows_text,
                      "inclusive period windows 'lo:hi;lo:hi' (default: one per period)");
  cmd_sum->add_option("-o,--output", sum.output, "summary CSV ('-' = stdout)");

  SummarizeArgs plot;  // reuses report/output fields
  auto* cmd_plot = app.add_subcommand(
      "plotdata", "long-format interval table for external plotting");
  cmd_plot->add_option("--report", plot.report, "saved report (CSV or JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_plot->add_option("-o,--output", plot.output, "plot-data CSV ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_est->parsed()) return run_estimate(est);
    if (cmd_eff->parsed()) return run_efficiency(eff);
    if (cmd_sum->parsed()) return run_summarize(sum);
    if (cmd_plot->parsed())
      return write_to(plot.output, [&](std::ostream& os) {
        lr::emit_plot_data(load_report(plot.report), os);
      });
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
