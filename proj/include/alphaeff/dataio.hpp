#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alphaeff/metrics.hpp"
#include "alphaeff/series.hpp"
#include "alphaeff/timeline.hpp"

namespace alphaeff {

// ---------------------------------------------------------------------------
// Measurement input
// ---------------------------------------------------------------------------

enum class InputFormat { Csv, Json };

struct ParseResult {
  std::vector<MeasurementSeries> series;
  std::vector<std::string> warnings;
};

/// Reads measurement series.
///
/// CSV: header `label,k,value,kind` (further columns are ignored), `#` lines
/// and blank lines skipped, kind one of time/speedup/efficiency. Rows are
/// grouped by label in order of first appearance.
/// JSON: {"series": [{"label", "kind", "baseline_k"?, "points": [{"k",
/// "value"}]}]}.
///
/// Throws ParseError (with the line number for CSV) on malformed rows,
/// duplicate (label, k), non-positive values, mixed kinds within a label,
/// unknown kinds, or a wall-time series without its baseline point.
ParseResult parse_measurements(std::string_view text, InputFormat format);
ParseResult parse_measurements(std::istream &in, InputFormat format);

/// Writes series in the input grammar (round-trips through
/// parse_measurements). CSV values use shortest round-trip form.
std::string emit_measurements(std::span<const MeasurementSeries> series,
                              InputFormat format);

/// Guesses the format from the first non-blank character ('{' means JSON).
InputFormat sniff_format(std::string_view text);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ScalingReport {
  std::string label;
  /// Ascending k.
  std::vector<MetricRow> rows;
  std::optional<AmdahlFit> fitted;
};

/// Per-point metrics of a series. The Amdahl fit is attached when at least
/// two points have k >= 2. Domain errors from the metrics propagate.
ScalingReport analyze(const MeasurementSeries &series);

enum class ReportFormat { Table, Csv, Json };

/// Deterministic rendering. CSV keeps the measurement header in front, so
/// its output parses back as a speedup series:
///   label,k,value,kind,efficiency,alpha_eff,serial_fraction,regime
/// Numbers are written in shortest round-trip form. JSON from emit_reports is
/// always {"reports": [...]}, even for a single report.
std::string emit_report(const ScalingReport &report, ReportFormat format);
std::string emit_reports(std::span<const ScalingReport> reports,
                         ReportFormat format);

enum class PlotAxis { Efficiency, SerialFraction };
enum class AxisScale { Linear, Log };

std::string_view to_string(PlotAxis axis);
std::string_view to_string(AxisScale scale);

struct PlotOptions {
  PlotAxis y_axis = PlotAxis::Efficiency;
  AxisScale xscale = AxisScale::Log;
  AxisScale yscale = AxisScale::Linear;
};

/// Scale hints matching the usual presentation: log k for efficiency plots
/// with a linear y, log y for serial fractions.
PlotOptions default_plot_options(PlotAxis axis);

/// Whitespace-separated `k value` blocks, one per report, each preceded by
/// `# series:`, `# y:`, `# xscale:` and `# yscale:` comments and separated by
/// two blank lines. Serial-fraction blocks omit the k = 1 row.
std::string emit_plot_data(std::span<const ScalingReport> reports,
                           const PlotOptions &options);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// ---------------------------------------------------------------------------
// Bundled fixtures
// ---------------------------------------------------------------------------

/// Published 1 - alpha_eff values of one series, read back from a plot.
struct PublishedSerialFraction {
  std::string label;
  std::vector<Observation> points; // value = 1 - alpha_eff
};

struct Fixture {
  std::string id;
  std::string description;
  std::vector<MeasurementSeries> series;
  std::vector<PublishedSerialFraction> published;
  /// False when only serial fractions were published, so nothing can be
  /// recomputed from raw measurements.
  bool verifiable = true;
  /// x-axis scale of the published serial-fraction view.
  AxisScale serial_fraction_xscale = AxisScale::Linear;
};

/// The five bundled ids: audio_radar, linpack_architectures,
/// algorithms_scaling, soc_rosenbrock, soc_rastrigin.
std::vector<std::string> fixture_ids();

/// Throws ParseError for an unknown id.
Fixture load_fixture(std::string_view id);

/// The bundled CSV text of a fixture, byte for byte.
std::string_view fixture_csv(std::string_view id);

/// Parses the fixture CSV dialect: measurement rows plus rows of kind
/// `serial_fraction` holding published 1 - alpha_eff values, and
/// `# id:`, `# description:`, `# verifiable:`, `# sf-xscale:` metadata.
Fixture parse_fixture(std::string_view text);

/// Speedup series consistent with published serial fractions under Amdahl's
/// law: S = 1 / (f + (1 - f) / k).
MeasurementSeries series_from_serial_fraction(
    const PublishedSerialFraction &published);

/// One report per measurement series, plus reconstructed reports for
/// published-only series.
std::vector<ScalingReport> analyze_fixture(const Fixture &fixture);

struct ConsistencyEntry {
  std::string label;
  int k = 0;
  double published = 0.0;
  double recomputed = 0.0;
  bool exempt = false; // published value is exactly zero
  bool ok = false;
};

/// Relative tolerance of read-back values.
inline constexpr double kReadBackRelTol = 0.05;
/// Absolute tolerance of read-back values.
inline constexpr double kReadBackAbsTol = 0.003;

/// |recomputed - published| <= max(5% of |published|, 0.003).
bool within_read_back_tolerance(double recomputed, double published);

/// Recomputes every published serial fraction from the matching measurement
/// series. Empty for non-verifiable fixtures.
std::vector<ConsistencyEntry> check_fixture(const Fixture &fixture);

// ---------------------------------------------------------------------------
// Timeline scenarios
// ---------------------------------------------------------------------------

/// {"segments": [{"kind": "S" | "P" | "C", "duration": number}]}
Timeline parse_timeline_json(std::string_view text);
std::string timeline_to_json(const Timeline &timeline);

/// Bundled scenario ids: "classic" and "realistic".
std::vector<std::string> scenario_ids();
std::string_view scenario_json(std::string_view id);

} // namespace alphaeff
