#include "lambda_rts/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace lambda_rts {
namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kReportColumns[] = {
    "period",      "dmu_id",     "alpha_lo", "alpha_hi", "rts_class",
    "lambda_star", "phi_union",  "phi_global", "phi_vrs", "phi_crs"};
constexpr std::size_t kReportWidth = std::size(kReportColumns);

std::string trim(const std::string& s) {
  auto sp = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  std::size_t b = 0, e = s.size();
  while (b < e && sp(s[b])) ++b;
  while (e > b && sp(s[e - 1])) --e;
  return s.substr(b, e - b);
}

void strip_bom(std::string& s) {
  if (s.size() >= 3 && s.compare(0, 3, "\xEF\xBB\xBF") == 0) s.erase(0, 3);
}

bool parse_double(const std::string& s, double& out) {
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), last, out);
  return ec == std::errc{} && p == last;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

ojson score_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) throw std::logic_error("report score is NaN");
  return v;
}

double score_from_json(const ojson& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error("bad score value '" + s + "'");
  }
  if (!j.is_number()) throw std::runtime_error("score is neither a number nor \"inf\"");
  return j.get<double>();
}

void rebuild_lambda(PanelRun& run) {
  for (auto& pr : run.periods) {
    std::vector<AlphaInterval> per;
    per.reserve(pr.units.size());
    for (const auto& u : pr.units) per.push_back(u.alpha);
    pr.lambda = aggregate_lambda(std::move(per));
  }
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_score(double v) {
  if (std::isnan(v)) throw std::logic_error("format_score: NaN is not a score");
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double parse_score(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  if (!parse_double(s, v)) throw std::runtime_error("bad numeric field '" + s + "'");
  return v;
}

RtsClass parse_rts_class(const std::string& s) {
  if (s == "IRS") return RtsClass::IRS;
  if (s == "DRS") return RtsClass::DRS;
  if (s == "CRS_NOT_REJECTED") return RtsClass::CRS_NOT_REJECTED;
  throw std::runtime_error("bad rts_class '" + s + "'");
}

IngestResult ingest_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty input: no header line");
  strip_bom(line);
  auto names = split_csv_line(line);
  for (auto& n : names) n = trim(n);

  int id_col = -1, period_col = -1;
  std::vector<std::pair<std::size_t, std::string>> x_cols, y_cols;
  for (std::size_t c = 0; c < names.size(); ++c) {
    const std::string& n = names[c];
    if (n == "dmu_id") {
      if (id_col >= 0) throw std::runtime_error("duplicate dmu_id column");
      id_col = static_cast<int>(c);
    } else if (n == "period") {
      if (period_col >= 0) throw std::runtime_error("duplicate period column");
      period_col = static_cast<int>(c);
    } else if (n.rfind("x_", 0) == 0) {
      x_cols.emplace_back(c, n);
    } else if (n.rfind("y_", 0) == 0) {
      y_cols.emplace_back(c, n);
    } else {
      throw std::runtime_error("unrecognized column '" + n +
                               "' (expected dmu_id, period, x_*, y_*)");
    }
  }
  if (id_col < 0) throw std::runtime_error("missing dmu_id column");
  if (x_cols.empty()) throw std::runtime_error("no x_* input columns");
  if (y_cols.empty()) throw std::runtime_error("no y_* output columns");

  IngestResult res;
  for (const auto& [c, n] : x_cols) res.input_names.push_back(n);
  for (const auto& [c, n] : y_cols) res.output_names.push_back(n);

  std::map<std::string, std::vector<ProductionUnit>, decltype(&label_less)> groups(
      &label_less);
  std::set<std::pair<std::string, std::string>> seen;

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ++res.rows_total;
    auto fields = split_csv_line(line);
    if (fields.size() != names.size()) {
      res.rejected.push_back({lineno, "", "",
                              "expected " + std::to_string(names.size()) +
                                  " fields, got " + std::to_string(fields.size())});
      continue;
    }
    for (auto& f : fields) f = trim(f);

    ProductionUnit u;
    u.id = fields[static_cast<std::size_t>(id_col)];
    if (period_col >= 0) u.period = fields[static_cast<std::size_t>(period_col)];
    if (u.id.empty()) {
      res.rejected.push_back({lineno, u.id, u.period, "empty dmu_id"});
      continue;
    }

    bool bad = false;
    std::string why;
    auto read_values = [&](const std::vector<std::pair<std::size_t, std::string>>& cols,
                           std::vector<double>& dst) {
      dst.reserve(cols.size());
      for (const auto& [c, n] : cols) {
        double v = 0.0;
        if (!parse_double(fields[c], v)) {
          bad = true;
          why = "unparseable number in " + n + ": '" + fields[c] + "'";
          return;
        }
        dst.push_back(v);
      }
    };
    read_values(x_cols, u.inputs);
    if (!bad) read_values(y_cols, u.outputs);
    if (bad) {
      res.rejected.push_back({lineno, u.id, u.period, why});
      continue;
    }

    if (auto issues = unit_issues(u, x_cols.size(), y_cols.size()); !issues.empty()) {
      std::string msg = issues.front();
      for (std::size_t i = 1; i < issues.size(); ++i) msg += "; " + issues[i];
      res.rejected.push_back({lineno, u.id, u.period, std::move(msg)});
      continue;
    }
    if (!seen.insert({u.period, u.id}).second) {
      res.rejected.push_back({lineno, u.id, u.period, "duplicate dmu_id within period"});
      continue;
    }
    groups[u.period].push_back(std::move(u));
  }

  res.periods.reserve(groups.size());
  for (auto& [period, units] : groups)
    res.periods.push_back(Dataset::validate(std::move(units)));
  return res;
}

IngestResult ingest_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return ingest_csv(in);
}

PointsResult read_points_csv(std::istream& in,
                             const std::vector<std::string>& input_names,
                             const std::vector<std::string>& output_names) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty points file: no header line");
  strip_bom(line);
  auto names = split_csv_line(line);
  for (auto& n : names) n = trim(n);

  int id_col = -1;
  std::vector<int> x_pos(input_names.size(), -1), y_pos(output_names.size(), -1);
  auto find_name = [](const std::vector<std::string>& pool, const std::string& n) {
    auto it = std::find(pool.begin(), pool.end(), n);
    return it == pool.end() ? -1 : static_cast<int>(it - pool.begin());
  };
  for (std::size_t c = 0; c < names.size(); ++c) {
    const std::string& n = names[c];
    if (n == "id" || n == "dmu_id") {
      if (id_col >= 0) throw std::runtime_error("duplicate id column in points file");
      id_col = static_cast<int>(c);
    } else if (int i = find_name(input_names, n); i >= 0) {
      if (x_pos[static_cast<std::size_t>(i)] >= 0)
        throw std::runtime_error("duplicate column '" + n + "' in points file");
      x_pos[static_cast<std::size_t>(i)] = static_cast<int>(c);
    } else if (int o = find_name(output_names, n); o >= 0) {
      if (y_pos[static_cast<std::size_t>(o)] >= 0)
        throw std::runtime_error("duplicate column '" + n + "' in points file");
      y_pos[static_cast<std::size_t>(o)] = static_cast<int>(c);
    } else {
      throw std::runtime_error("points column '" + n +
                               "' matches no panel input or output column");
    }
  }
  for (std::size_t i = 0; i < x_pos.size(); ++i)
    if (x_pos[i] < 0)
      throw std::runtime_error("points file is missing column '" + input_names[i] + "'");
  for (std::size_t o = 0; o < y_pos.size(); ++o)
    if (y_pos[o] < 0)
      throw std::runtime_error("points file is missing column '" + output_names[o] + "'");

  PointsResult res;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != names.size()) {
      res.rejected.push_back({lineno, "", "",
                              "expected " + std::to_string(names.size()) +
                                  " fields, got " + std::to_string(fields.size())});
      continue;
    }
    for (auto& f : fields) f = trim(f);

    PointRow p;
    p.id = id_col >= 0 ? fields[static_cast<std::size_t>(id_col)]
                       : "p" + std::to_string(lineno - 1);
    bool bad = false;
    std::string why;
    auto read_at = [&](const std::vector<int>& pos, const std::vector<std::string>& pool,
                       std::vector<double>& dst) {
      dst.reserve(pos.size());
      for (std::size_t i = 0; i < pos.size(); ++i) {
        double v = 0.0;
        const std::string& field = fields[static_cast<std::size_t>(pos[i])];
        if (!parse_double(field, v) || !std::isfinite(v) || v < 0.0) {
          bad = true;
          why = "bad value in " + pool[i] + ": '" + field + "'";
          return;
        }
        dst.push_back(v);
      }
    };
    read_at(x_pos, input_names, p.x);
    if (!bad) read_at(y_pos, output_names, p.y);
    if (!bad && std::all_of(p.x.begin(), p.x.end(), [](double v) { return v == 0.0; })) {
      bad = true;
      why = "inputs are all zero";
    }
    if (bad) {
      res.rejected.push_back({lineno, p.id, "", std::move(why)});
      continue;
    }
    res.points.push_back(std::move(p));
  }
  return res;
}

void emit_report_csv(const PanelRun& run, std::ostream& os) {
  os << join({kReportColumns, kReportColumns + kReportWidth}, ",") << '\n';
  for (const auto& pr : run.periods) {
    for (const auto& u : pr.units) {
      os << csv_field(pr.period) << ',' << csv_field(u.dmu_id) << ','
         << format_score(u.alpha.lo.value()) << ',' << format_score(u.alpha.hi.value())
         << ',' << to_string(u.rts) << ',' << format_score(u.lambda_star) << ','
         << format_score(u.phi_union) << ',' << format_score(u.phi_global) << ','
         << format_score(u.phi_vrs) << ',' << format_score(u.phi_crs) << '\n';
    }
  }
}

PanelRun parse_report_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty report: no header line");
  strip_bom(line);
  auto names = split_csv_line(line);
  for (auto& n : names) n = trim(n);
  const std::vector<std::string> expected(kReportColumns, kReportColumns + kReportWidth);
  if (names != expected)
    throw std::runtime_error("unexpected report header '" + join(names, ",") + "'");

  PanelRun run;
  std::map<std::string, std::size_t> period_index;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != kReportWidth)
      throw std::runtime_error("report line " + std::to_string(lineno) +
                               ": wrong field count");
    for (auto& s : f) s = trim(s);

    UnitResult u;
    u.dmu_id = f[1];
    u.alpha = AlphaInterval{ExtendedReal(parse_score(f[2])), ExtendedReal(parse_score(f[3]))};
    u.rts = parse_rts_class(f[4]);
    u.lambda_star = parse_score(f[5]);
    u.phi_union = parse_score(f[6]);
    u.phi_global = parse_score(f[7]);
    u.phi_vrs = parse_score(f[8]);
    u.phi_crs = parse_score(f[9]);

    auto [it, fresh] = period_index.try_emplace(f[0], run.periods.size());
    if (fresh) run.periods.push_back(PeriodResult{f[0], {}, {}});
    run.periods[it->second].units.push_back(std::move(u));
  }
  rebuild_lambda(run);
  return run;
}

void emit_report_json(const PanelRun& run, std::ostream& os) {
  ojson root;
  root["schema"] = "lambda-rts-report/1";
  root["periods"] = ojson::array();
  for (const auto& pr : run.periods) {
    ojson jp;
    jp["period"] = pr.period;
    ojson sup = ojson::array();
    for (const auto& iv : pr.lambda.support)
      sup.push_back(ojson::array({score_to_json(iv.lo.value()), score_to_json(iv.hi.value())}));
    jp["support"] = std::move(sup);
    jp["units"] = ojson::array();
    for (const auto& u : pr.units) {
      ojson ju;
      ju["dmu_id"] = u.dmu_id;
      ju["alpha_lo"] = score_to_json(u.alpha.lo.value());
      ju["alpha_hi"] = score_to_json(u.alpha.hi.value());
      ju["rts_class"] = to_string(u.rts);
      ju["lambda_star"] = score_to_json(u.lambda_star);
      ju["phi_union"] = score_to_json(u.phi_union);
      ju["phi_global"] = score_to_json(u.phi_global);
      ju["phi_vrs"] = score_to_json(u.phi_vrs);
      ju["phi_crs"] = score_to_json(u.phi_crs);
      jp["units"].push_back(std::move(ju));
    }
    root["periods"].push_back(std::move(jp));
  }
  os << root.dump(2) << '\n';
}

PanelRun parse_report_json(std::istream& is) {
  ojson root = ojson::parse(is);
  if (!root.contains("periods") || !root["periods"].is_array())
    throw std::runtime_error("report JSON lacks a periods array");
  PanelRun run;
  for (const auto& jp : root["periods"]) {
    PeriodResult pr;
    pr.period = jp.at("period").get<std::string>();
    for (const auto& ju : jp.at("units")) {
      UnitResult u;
      u.dmu_id = ju.at("dmu_id").get<std::string>();
      u.alpha = AlphaInterval{ExtendedReal(score_from_json(ju.at("alpha_lo"))),
                              ExtendedReal(score_from_json(ju.at("alpha_hi")))};
      u.rts = parse_rts_class(ju.at("rts_class").get<std::string>());
      u.lambda_star = score_from_json(ju.at("lambda_star"));
      u.phi_union = score_from_json(ju.at("phi_union"));
      u.phi_global = score_from_json(ju.at("phi_global"));
      u.phi_vrs = score_from_json(ju.at("phi_vrs"));
      u.phi_crs = score_from_json(ju.at("phi_crs"));
      pr.units.push_back(std::move(u));
    }
    run.periods.push_back(std::move(pr));
  }
  rebuild_lambda(run);
  return run;
}

void emit_plot_data(const PanelRun& run, std::ostream& os) {
  struct Row {
    const std::string* id;
    const std::string* period;
    const UnitResult* u;
  };
  std::vector<Row> rows;
  for (const auto& pr : run.periods)
    for (const auto& u : pr.units) rows.push_back({&u.dmu_id, &pr.period, &u});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (label_less(*a.id, *b.id)) return true;
    if (label_less(*b.id, *a.id)) return false;
    return label_less(*a.period, *b.period);
  });
  os << "period,dmu_id,alpha_lo,alpha_hi,rts_class\n";
  for (const auto& r : rows)
    os << csv_field(*r.period) << ',' << csv_field(*r.id) << ','
       << format_score(r.u->alpha.lo.value()) << ','
       << format_score(r.u->alpha.hi.value()) << ',' << to_string(r.u->rts) << '\n';
}

void emit_summary_csv(const std::vector<ClassShares>& shares, std::ostream& os) {
  os << "window_lo,window_hi,n,irs,drs,crs_not_rejected,irs_share,drs_share,crs_share\n";
  for (const auto& s : shares)
    os << csv_field(s.window_lo) << ',' << csv_field(s.window_hi) << ',' << s.n << ','
       << s.irs << ',' << s.drs << ',' << s.crs << ',' << format_score(s.irs_share)
       << ',' << format_score(s.drs_share) << ',' << format_score(s.crs_share) << '\n';
}

}  // namespace lambda_rts
