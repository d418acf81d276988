#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambda_rts/panel.hpp"
#include "lambda_rts/report_io.hpp"

using namespace lambda_rts;

namespace {

const char* kFourUnitCsv =
    "dmu_id,x_cap,y_out\n"
    "1,1,1\n"
    "2,4,2\n"
    "3,2.5,1.5\n"
    "4,3,5\n";

IngestResult ingest_str(const std::string& s) {
  std::istringstream in(s);
  return ingest_csv(in);
}

std::string emit_csv(const PanelRun& run) {
  std::ostringstream os;
  emit_report_csv(run, os);
  return os.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("ingest groups by period and sorts labels numerically") {
  const auto res = ingest_str(
      "dmu_id,period,x_a,x_b,y_a\n"
      "u1,10,1,2,3\n"
      "u2,2,1,2,3\n"
      "u1,2,4,5,6\n");
  CHECK(res.rows_total == 3);
  CHECK(res.rejected.empty());
  REQUIRE(res.periods.size() == 2);
  CHECK(res.periods[0].unit(0).period == "2");
  CHECK(res.periods[1].unit(0).period == "10");
  CHECK(res.periods[0].size() == 2);
  CHECK(res.input_names == std::vector<std::string>{"x_a", "x_b"});
  CHECK(res.output_names == std::vector<std::string>{"y_a"});
}

TEST_CASE("ingest rejects bad rows but keeps the rest") {
  const auto res = ingest_str(
      "dmu_id,period,x_a,y_a\n"
      "ok,1,2,3\n"
      "bad1,1,oops,3\n"
      "bad2,1,-1,3\n"
      "bad3,1,2,0\n"
      "bad4,1,2\n"
      ",1,2,3\n"
      "ok,1,9,9\n"
      "\n"
      "ok,2,9,9\n");
  CHECK(res.rows_total == 8);  // blank line is not a row
  REQUIRE(res.rejected.size() == 6);
  CHECK(res.rejected[0].id == "bad1");
  CHECK(res.rejected[0].line == 3);
  CHECK(res.rejected[0].reason == "unparseable number in x_a: 'oops'");
  CHECK(res.rejected[1].reason.find("negative") != std::string::npos);
  CHECK(res.rejected[2].reason.find("zero") != std::string::npos);
  CHECK(res.rejected[3].reason.find("expected 4 fields") != std::string::npos);
  CHECK(res.rejected[4].reason == "empty dmu_id");
  CHECK(res.rejected[5].reason == "duplicate dmu_id within period");

  // Row conservation: every data line is kept or logged, never dropped.
  std::size_t kept = 0;
  for (const auto& d : res.periods) kept += d.size();
  CHECK(kept + res.rejected.size() == res.rows_total);
}

TEST_CASE("ingest rejects an empty dmu_id") {
  const auto res = ingest_str(
      "dmu_id,x_a,y_a\n"
      ",2,3\n"
      "ok,2,3\n");
  CHECK(res.rows_total == 2);
  REQUIRE(res.rejected.size() == 1);
  CHECK(res.rejected[0].reason == "empty dmu_id");
  CHECK(res.periods.size() == 1);
}

TEST_CASE("ingest tolerates BOM and CRLF and quoted fields") {
  const auto res = ingest_str(
      "\xEF\xBB\xBF"
      "dmu_id,period,x_a,y_a\r\n"
      "\"unit, one\",1999,2,3\r\n");
  CHECK(res.rows_total == 1);
  CHECK(res.rejected.empty());
  REQUIRE(res.periods.size() == 1);
  CHECK(res.periods[0].unit(0).id == "unit, one");
}

TEST_CASE("ingest refuses unusable headers") {
  CHECK_THROWS_AS(ingest_str("dmu_id,x_a,y_a,notes\nu,1,1,hi\n"),
                  std::runtime_error);
  CHECK_THROWS_AS(ingest_str("dmu_id,y_a\nu,1\n"), std::runtime_error);
  CHECK_THROWS_AS(ingest_str("dmu_id,x_a\nu,1\n"), std::runtime_error);
  CHECK_THROWS_AS(ingest_str("period,x_a,y_a\n1,1,1\n"), std::runtime_error);
  CHECK_THROWS_AS(ingest_str(""), std::runtime_error);
}

TEST_CASE("estimation results on the four-unit set") {
  const auto ing = ingest_str(kFourUnitCsv);
  REQUIRE(ing.periods.size() == 1);
  const PanelRun run = run_panel(ing.periods, {.epsilon = 1e-6, .threads = 1});
  REQUIRE(run.periods.size() == 1);
  const auto& units = run.periods[0].units;
  REQUIRE(units.size() == 4);

  CHECK(units[0].dmu_id == "1");
  CHECK(units[0].rts == RtsClass::IRS);
  CHECK(units[0].lambda_star == 0.0);
  CHECK(units[0].phi_union == 1.0);
  CHECK(units[0].phi_vrs == 1.0);
  CHECK(units[0].phi_crs == 0.6000000000000001);
  CHECK(units[0].alpha.lo.value() ==
        doctest::Approx(1.464973520717927).epsilon(1e-12));
  CHECK(units[0].alpha.hi.infinite());

  CHECK(units[1].rts == RtsClass::IRS);
  CHECK(units[1].lambda_star ==
        doctest::Approx(-0.9131478019791762).epsilon(1e-12));
  CHECK(units[1].phi_union ==
        doctest::Approx(0.401259149631009604).epsilon(1e-12));
  CHECK(units[1].phi_vrs == 0.75);
  CHECK(units[1].phi_crs == 0.30000000000000004);
  CHECK(units[1].alpha.singleton());

  CHECK(units[2].rts == RtsClass::IRS);
  CHECK(units[2].phi_union ==
        doctest::Approx(0.527546778769721578).epsilon(1e-12));
  CHECK(units[2].phi_vrs == 1.0);
  CHECK(units[2].phi_crs == 0.36);

  CHECK(units[3].rts == RtsClass::CRS_NOT_REJECTED);
  CHECK(units[3].lambda_star == 0.0);
  CHECK(units[3].phi_union == 1.0);
  CHECK(units[3].phi_vrs == 1.0);
  CHECK(units[3].phi_crs == 1.0);
  CHECK(units[3].alpha.lo.zero());

  // The support collapses to one interval covering every elasticity, so the
  // intersection gauge at each unit equals its best union score exactly.
  REQUIRE(run.periods[0].lambda.support.size() == 1);
  for (const auto& u : units) CHECK(u.phi_global == u.phi_union);
}

TEST_CASE("panel output is identical across thread counts") {
  const auto ing = ingest_str(
      "dmu_id,period,x_a,y_a\n"
      "1,t1,1,1\n"
      "2,t1,4,2\n"
      "3,t1,2.5,1.5\n"
      "4,t1,3,5\n"
      "1,t2,2,1\n"
      "2,t2,5,2\n"
      "3,t2,1,4\n");
  const auto seq = run_panel(ing.periods, {.epsilon = 1e-6, .threads = 1});
  const auto par = run_panel(ing.periods, {.epsilon = 1e-6, .threads = 4});
  CHECK(emit_csv(seq) == emit_csv(par));
}

TEST_CASE("empty panel emits a header-only report") {
  const PanelRun run = run_panel({});
  CHECK(run.periods.empty());
  const auto ls = lines_of(emit_csv(run));
  REQUIRE(ls.size() == 1);
  CHECK(ls[0] ==
        "period,dmu_id,alpha_lo,alpha_hi,rts_class,lambda_star,phi_union,"
        "phi_global,phi_vrs,phi_crs");
}

TEST_CASE("report CSV carries classes and infinities verbatim") {
  const auto ing = ingest_str(kFourUnitCsv);
  const auto run = run_panel(ing.periods, {.epsilon = 1e-6, .threads = 1});
  const auto ls = lines_of(emit_csv(run));
  REQUIRE(ls.size() == 5);
  CHECK(ls[1].find(",IRS,") != std::string::npos);
  CHECK(ls[1].find(",inf,") != std::string::npos);  // unit 1 alpha_hi
  CHECK(ls[4].find(",CRS_NOT_REJECTED,") != std::string::npos);
  CHECK(ls[4].substr(0, 4) == ",4,0");  // empty period, id 4, alpha_lo 0
}

TEST_CASE("report round trips byte-identically") {
  const auto ing = ingest_str(
      "dmu_id,period,x_a,y_a\n"
      "1,t1,1,1\n"
      "2,t1,4,2\n"
      "3,t1,2.5,1.5\n"
      "4,t1,3,5\n"
      "5,t2,2,2\n"
      "6,t2,3,1\n");
  const auto run = run_panel(ing.periods, {.epsilon = 1e-6, .threads = 1});

  const std::string csv1 = emit_csv(run);
  std::istringstream csv_in(csv1);
  const PanelRun back = parse_report_csv(csv_in);
  CHECK(emit_csv(back) == csv1);

  std::ostringstream j1;
  emit_report_json(run, j1);
  std::istringstream j_in(j1.str());
  const PanelRun jback = parse_report_json(j_in);
  std::ostringstream j2;
  emit_report_json(jback, j2);
  CHECK(j2.str() == j1.str());

  // Cross-format: intervals and classes survive either path.
  REQUIRE(jback.periods.size() == back.periods.size());
  for (std::size_t p = 0; p < jback.periods.size(); ++p) {
    REQUIRE(jback.periods[p].units.size() == back.periods[p].units.size());
    for (std::size_t i = 0; i < jback.periods[p].units.size(); ++i)
      CHECK(jback.periods[p].units[i].rts == back.periods[p].units[i].rts);
  }
}

TEST_CASE("report CSV parser rejects foreign headers and short lines") {
  std::istringstream h("period,dmu_id,alpha_lo\n");
  CHECK_THROWS_AS(parse_report_csv(h), std::runtime_error);
  std::istringstream s(
      "period,dmu_id,alpha_lo,alpha_hi,rts_class,lambda_star,phi_union,"
      "phi_global,phi_vrs,phi_crs\n"
      "t1,u,1,2,IRS,0\n");
  CHECK_THROWS_AS(parse_report_csv(s), std::runtime_error);
}

TEST_CASE("plot data is sorted by unit then period") {
  const auto ing = ingest_str(
      "dmu_id,period,x_a,y_a\n"
      "10,1,1,1\n"
      "2,1,4,2\n"
      "2,0,3,5\n");
  const auto run = run_panel(ing.periods, {.epsilon = 1e-6, .threads = 1});
  std::ostringstream os;
  emit_plot_data(run, os);
  const auto ls = lines_of(os.str());
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "period,dmu_id,alpha_lo,alpha_hi,rts_class");
  CHECK(ls[1].substr(0, 4) == "0,2,");
  CHECK(ls[2].substr(0, 4) == "1,2,");
  CHECK(ls[3].substr(0, 5) == "1,10,");
}

TEST_CASE("class share summaries") {
  const auto ing = ingest_str(
      "dmu_id,period,x_a,y_a\n"
      "1,1987,1,1\n"
      "2,1987,4,2\n"
      "3,1987,2.5,1.5\n"
      "4,1987,3,5\n"
      "1,1995,1,1\n"
      "2,1995,4,2\n");
  const auto run = run_panel(ing.periods, {.epsilon = 1e-6, .threads = 1});

  SUBCASE("default: one window per period") {
    const auto shares = summarize_distribution(run);
    REQUIRE(shares.size() == 2);
    CHECK(shares[0].window_lo == "1987");
    CHECK(shares[0].n == 4);
    CHECK(shares[0].irs == 3);
    CHECK(shares[0].crs == 1);
    CHECK(shares[0].irs_share == doctest::Approx(0.75));
    CHECK(shares[0].irs_share + shares[0].drs_share + shares[0].crs_share ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(shares[1].window_lo == "1995");
    CHECK(shares[1].n == 2);
  }

  SUBCASE("explicit windows, empty ones omitted") {
    const auto shares = summarize_distribution(
        run, {{"1980", "1989"}, {"1990", "1999"}, {"2000", "2010"}});
    REQUIRE(shares.size() == 2);
    CHECK(shares[0].n == 4);
    CHECK(shares[1].n == 2);
    CHECK(shares[1].window_lo == "1990");
  }

  SUBCASE("numeric window bounds compare numerically") {
    const auto shares = summarize_distribution(run, {{"987", "99999"}});
    REQUIRE(shares.size() == 1);
    CHECK(shares[0].n == 6);
  }

  SUBCASE("summary CSV layout") {
    std::ostringstream os;
    emit_summary_csv(summarize_distribution(run), os);
    const auto ls = lines_of(os.str());
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] ==
          "window_lo,window_hi,n,irs,drs,crs_not_rejected,irs_share,"
          "drs_share,crs_share");
    CHECK(ls[1].substr(0, 15) == "1987,1987,4,3,0");
  }
}

TEST_CASE("period label ordering") {
  CHECK(label_less("2", "10"));
  CHECK(!label_less("10", "2"));
  CHECK(label_less("1999", "2000"));
  CHECK(label_less("a", "b"));
  CHECK(label_less("1999", "a"));  // lexicographic once either side is text
  CHECK(!label_less("t1", "t1"));
}

TEST_CASE("thread cap resolution") {
  CHECK(resolve_thread_cap(3) == 3);
  setenv("LAMBDA_RTS_THREADS", "2", 1);
  CHECK(resolve_thread_cap(0) == 2);
  setenv("LAMBDA_RTS_THREADS", "parsnip", 1);
  CHECK(resolve_thread_cap(0) >= 1);
  setenv("LAMBDA_RTS_THREADS", "-4", 1);
  CHECK(resolve_thread_cap(0) >= 1);
  unsetenv("LAMBDA_RTS_THREADS");
  CHECK(resolve_thread_cap(0) >= 1);
}

TEST_CASE("evaluation points match panel columns by name") {
  const std::vector<std::string> xs{"x_a", "x_b"};
  const std::vector<std::string> ys{"y_a"};

  std::istringstream in(
      "y_a,id,x_b,x_a\n"
      "3,p-one,2,1\n"
      "4,,5,0\n");
  const auto res = read_points_csv(in, xs, ys);
  CHECK(res.rejected.empty());
  REQUIRE(res.points.size() == 2);
  CHECK(res.points[0].id == "p-one");
  CHECK(res.points[0].x == std::vector<double>{1.0, 2.0});
  CHECK(res.points[0].y == std::vector<double>{3.0});
  CHECK(res.points[1].x == std::vector<double>{0.0, 5.0});

  std::istringstream noid(
      "x_a,x_b,y_a\n"
      "1,2,3\n");
  const auto anon = read_points_csv(noid, xs, ys);
  REQUIRE(anon.points.size() == 1);
  CHECK(anon.points[0].id == "p1");
}

TEST_CASE("evaluation point rejections") {
  const std::vector<std::string> xs{"x_a"};
  const std::vector<std::string> ys{"y_a"};

  std::istringstream in(
      "x_a,y_a\n"
      "-1,1\n"
      "nope,1\n"
      "0,1\n"
      "1,0\n");
  const auto res = read_points_csv(in, xs, ys);
  REQUIRE(res.points.size() == 1);  // zero output is a legal point
  CHECK(res.points[0].y == std::vector<double>{0.0});
  REQUIRE(res.rejected.size() == 3);
  CHECK(res.rejected[0].reason == "bad value in x_a: '-1'");
  CHECK(res.rejected[1].reason == "bad value in x_a: 'nope'");
  CHECK(res.rejected[2].reason == "inputs are all zero");

  std::istringstream missing("x_a\n1\n");
  CHECK_THROWS_AS(read_points_csv(missing, xs, ys), std::runtime_error);
  std::istringstream foreign("x_a,y_a,z_q\n1,1,1\n");
  CHECK_THROWS_AS(read_points_csv(foreign, xs, ys), std::runtime_error);
}

TEST_CASE("score formatting") {
  CHECK(format_score(1.0) == "1");
  CHECK(format_score(0.75) == "0.75");
  CHECK(format_score(0.401259149631009604) == "0.40125915");
  CHECK(format_score(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(parse_score("inf") == std::numeric_limits<double>::infinity());
  CHECK(parse_score("0.75") == 0.75);
  CHECK_THROWS_AS(parse_score("0.75x"), std::runtime_error);
  CHECK_THROWS_AS(parse_score(""), std::runtime_error);
  CHECK_THROWS_AS(format_score(std::numeric_limits<double>::quiet_NaN()),
                  std::logic_error);

  const double v = 0.527546778769721578;
  CHECK(parse_score(format_score(v)) == doctest::Approx(v).epsilon(1e-8));
}

TEST_CASE("rts class parsing") {
  CHECK(parse_rts_class("IRS") == RtsClass::IRS);
  CHECK(parse_rts_class("DRS") == RtsClass::DRS);
  CHECK(parse_rts_class("CRS_NOT_REJECTED") == RtsClass::CRS_NOT_REJECTED);
  CHECK_THROWS_AS(parse_rts_class("VRS"), std::runtime_error);
}

TEST_CASE("csv field quoting round trips") {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"",
                                        ""};
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  CHECK(split_csv_line(line) == fields);
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
}
