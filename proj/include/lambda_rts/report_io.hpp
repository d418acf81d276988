#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lambda_rts/panel.hpp"

namespace lambda_rts {

// ---------------------------------------------------------------------------
// Panel CSV ingestion.
//
// Expected header: `dmu_id`, optional `period`, one or more `x_*` input
// columns and `y_*` output columns (any other column is an error). Rows that
// fail structural validation are skipped and logged; the caller decides
// whether rejection is fatal. Row conservation: every data line is either in
// a period dataset or in the rejection log.
// ---------------------------------------------------------------------------

struct RejectedRow {
  std::size_t line = 0;  ///< 1-based, header is line 1
  std::string id;
  std::string period;
  std::string reason;
};

struct IngestResult {
  std::vector<Dataset> periods;  ///< sorted by period label, numeric-aware
  std::vector<RejectedRow> rejected;
  std::size_t rows_total = 0;  ///< data lines seen (excluding the header)
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
};

/// Throws std::runtime_error on unusable input (missing/blank header,
/// missing dmu_id or x_*/y_* columns). Per-row problems never throw.
IngestResult ingest_csv(std::istream& in);
IngestResult ingest_csv_file(const std::string& path);

/// Arbitrary evaluation points, columns matched to the panel's x_*/y_*
/// header names; an optional `id` column labels output rows.
struct PointRow {
  std::string id;
  std::vector<double> x;
  std::vector<double> y;
};

struct PointsResult {
  std::vector<PointRow> points;
  std::vector<RejectedRow> rejected;
};

PointsResult read_points_csv(std::istream& in,
                             const std::vector<std::string>& input_names,
                             const std::vector<std::string>& output_names);

// ---------------------------------------------------------------------------
// Report serialization. Scores are written with 9 significant digits in CSV,
// full round-trip precision in JSON; infinities are the literal "inf" in
// both. parse(emit(run)) reproduces the emitted values exactly, so a second
// emit is byte-identical.
// ---------------------------------------------------------------------------

void emit_report_csv(const PanelRun& run, std::ostream& os);
void emit_report_json(const PanelRun& run, std::ostream& os);

/// Rebuild a run from a serialized report. Estimation internals that the
/// report does not carry (beta_star, the aggregated collection) are restored
/// from the per-unit intervals where possible; beta_star is left 0.
PanelRun parse_report_csv(std::istream& is);
PanelRun parse_report_json(std::istream& is);

/// Long-format interval data for plotting, sorted by (dmu_id, period).
void emit_plot_data(const PanelRun& run, std::ostream& os);

void emit_summary_csv(const std::vector<ClassShares>& shares, std::ostream& os);

/// 9 significant digits; +inf becomes "inf". NaN is a caller bug and throws.
std::string format_score(double v);
double parse_score(const std::string& s);

RtsClass parse_rts_class(const std::string& s);

/// Minimal CSV helpers (comma separator, RFC-style double-quote escaping,
/// no embedded newlines).
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_field(const std::string& value);

}  // namespace lambda_rts
