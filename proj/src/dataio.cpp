#include "alphaeff/dataio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "alphaeff/errors.hpp"
#include "csv.hpp"

namespace alphaeff {

using json = nlohmann::ordered_json;

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), p);
}

InputFormat sniff_format(std::string_view text) {
  const auto pos = text.find_first_not_of(" \t\r\n\xEF\xBB\xBF");
  if (pos != std::string_view::npos && text[pos] == '{')
    return InputFormat::Json;
  return InputFormat::Csv;
}

namespace {

struct SeriesBuilder {
  std::string label;
  ValueKind kind;
  std::size_t first_line;
  std::vector<Observation> points;
  std::set<int> ks;
};

MeasurementSeries finish(SeriesBuilder &b, int baseline_k = 1) {
  if (b.kind == ValueKind::WallTime && !b.ks.contains(baseline_k))
    throw ParseError("series '" + b.label +
                         "' holds wall times but has no baseline point at k=" +
                         std::to_string(baseline_k),
                     b.first_line);
  try {
    return MeasurementSeries(b.label, b.kind, std::move(b.points), baseline_k);
  } catch (const DomainError &e) {
    throw ParseError(e.what(), b.first_line);
  }
}

ParseResult parse_csv(std::string_view text) {
  const auto doc = detail::read_csv(text);
  ParseResult out;

  std::vector<SeriesBuilder> builders;
  std::map<std::string, std::size_t, std::less<>> index;
  for (const auto &row : doc.rows) {
    const auto &f = row.fields;
    ValueKind kind;
    try {
      kind = parse_value_kind(f[3]);
    } catch (const ParseError &e) {
      throw ParseError(e.what(), row.line);
    }
    const int k = detail::parse_int_field(f[1], row.line, "processor count");
    const double value = detail::parse_double_field(f[2], row.line, "value");
    if (k < 1)
      throw ParseError("processor count must be >= 1", row.line);
    if (value <= 0.0)
      throw ParseError("value must be > 0", row.line);

    auto it = index.find(f[0]);
    if (it == index.end()) {
      it = index.emplace(f[0], builders.size()).first;
      builders.push_back({f[0], kind, row.line, {}, {}});
    }
    auto &b = builders[it->second];
    if (b.kind != kind)
      throw ParseError("series '" + b.label + "' mixes kinds '" +
                           std::string(to_string(b.kind)) + "' and '" +
                           std::string(to_string(kind)) + "'",
                       row.line);
    if (!b.ks.insert(k).second)
      throw ParseError("duplicate processor count " + std::to_string(k) +
                           " in series '" + b.label + "'",
                       row.line);
    b.points.push_back({k, value});
  }

  for (auto &b : builders)
    out.series.push_back(finish(b));
  if (out.series.empty())
    out.warnings.emplace_back("input contains no measurements");
  return out;
}

ParseResult parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }

  ParseResult out;
  if (!doc.is_object() || !doc.contains("series") || !doc["series"].is_array())
    throw ParseError("JSON input must be an object with a 'series' array");

  std::set<std::string> labels;
  std::size_t idx = 0;
  for (const auto &s : doc["series"]) {
    const auto where = "series[" + std::to_string(idx++) + "]";
    if (!s.is_object() || !s.contains("label") || !s["label"].is_string())
      throw ParseError(where + ": missing string 'label'");
    if (!s.contains("kind") || !s["kind"].is_string())
      throw ParseError(where + ": missing string 'kind'");
    if (!s.contains("points") || !s["points"].is_array())
      throw ParseError(where + ": missing 'points' array");

    SeriesBuilder b{s["label"].get<std::string>(),
                    parse_value_kind(s["kind"].get<std::string>()), 0, {}, {}};
    if (!labels.insert(b.label).second)
      throw ParseError(where + ": duplicate series label '" + b.label + "'");

    int baseline_k = 1;
    if (s.contains("baseline_k")) {
      if (!s["baseline_k"].is_number_integer())
        throw ParseError(where + ": 'baseline_k' must be an integer");
      baseline_k = s["baseline_k"].get<int>();
    }

    for (const auto &p : s["points"]) {
      if (!p.is_object() || !p.contains("k") || !p["k"].is_number_integer() ||
          !p.contains("value") || !p["value"].is_number())
        throw ParseError(where + ": each point needs integer 'k' and numeric "
                                 "'value'");
      const int k = p["k"].get<int>();
      const double v = p["value"].get<double>();
      if (k < 1)
        throw ParseError(where + ": processor count must be >= 1");
      if (!(v > 0.0))
        throw ParseError(where + ": value must be > 0");
      if (!b.ks.insert(k).second)
        throw ParseError(where + ": duplicate processor count " +
                         std::to_string(k));
      b.points.push_back({k, v});
    }
    out.series.push_back(finish(b, baseline_k));
  }
  if (out.series.empty())
    out.warnings.emplace_back("input contains no measurements");
  return out;
}

} // namespace

ParseResult parse_measurements(std::string_view text, InputFormat format) {
  return format == InputFormat::Json ? parse_json(text) : parse_csv(text);
}

ParseResult parse_measurements(std::istream &in, InputFormat format) {
  std::string text(std::istreambuf_iterator<char>(in), {});
  if (in.bad())
    throw IoError("failed to read measurement stream");
  return parse_measurements(text, format);
}

std::string emit_measurements(std::span<const MeasurementSeries> series,
                              InputFormat format) {
  if (format == InputFormat::Json) {
    json doc;
    doc["series"] = json::array();
    for (const auto &s : series) {
      json js;
      js["label"] = s.label();
      js["kind"] = to_string(s.kind());
      js["baseline_k"] = s.baseline_k();
      js["points"] = json::array();
      for (const auto &p : s.points())
        js["points"].push_back({{"k", p.k}, {"value", p.value}});
      doc["series"].push_back(std::move(js));
    }
    return doc.dump(2) + "\n";
  }
  std::string out = "label,k,value,kind\n";
  for (const auto &s : series) {
    const auto label = detail::csv_field(s.label());
    for (const auto &p : s.points())
      out += label + ',' + std::to_string(p.k) + ',' + format_double(p.value) +
             ',' + std::string(to_string(s.kind())) + '\n';
  }
  return out;
}

ScalingReport analyze(const MeasurementSeries &series) {
  ScalingReport r;
  r.label = series.label();
  const auto pts = series.speedups();
  r.rows.reserve(pts.size());
  int usable = 0;
  for (const auto &p : pts) {
    r.rows.push_back(make_metric_row(p.k, p.speedup));
    usable += p.k >= 2 ? 1 : 0;
  }
  if (usable >= 2)
    r.fitted = fit_alpha(std::span<const SpeedupPoint>(pts));
  return r;
}

// ---------------------------------------------------------------------------
// Emitters
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kCsvHeader =
    "label,k,value,kind,efficiency,alpha_eff,serial_fraction,regime\n";

std::string table_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string table_header() {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%6s  %12s  %12s  %12s  %12s  %s\n", "k",
                "speedup", "efficiency", "alpha_eff", "1-alpha_eff", "regime");
  return buf;
}

void append_table(std::string &out, const ScalingReport &r) {
  out += "series: " + r.label + "\n";
  out += table_header();
  for (const auto &row : r.rows) {
    char buf[160];
    std::snprintf(
        buf, sizeof buf, "%6d  %12s  %12s  %12s  %12s  %s\n", row.k,
        table_number(row.speedup).c_str(), table_number(row.efficiency).c_str(),
        row.alpha_eff ? table_number(*row.alpha_eff).c_str() : "-",
        row.serial_fraction ? table_number(*row.serial_fraction).c_str() : "-",
        std::string(to_string(row.regime)).c_str());
    out += buf;
  }
  if (r.fitted)
    out += "fit: alpha=" + table_number(r.fitted->model.alpha()) +
           " residual=" + table_number(r.fitted->residual) + " points=" +
           std::to_string(r.fitted->points_used) + "\n";
}

void append_csv_rows(std::string &out, const ScalingReport &r) {
  const auto label = detail::csv_field(r.label);
  for (const auto &row : r.rows) {
    out += label;
    out += ',' + std::to_string(row.k);
    out += ',' + format_double(row.speedup);
    out += ",speedup";
    out += ',' + format_double(row.efficiency);
    out += ',' + (row.alpha_eff ? format_double(*row.alpha_eff) : "");
    out += ',' + (row.serial_fraction ? format_double(*row.serial_fraction) : "");
    out += ',';
    out += to_string(row.regime);
    out += '\n';
  }
}

json report_json(const ScalingReport &r) {
  json j;
  j["label"] = r.label;
  j["rows"] = json::array();
  for (const auto &row : r.rows) {
    json jr;
    jr["k"] = row.k;
    jr["speedup"] = row.speedup;
    jr["efficiency"] = row.efficiency;
    jr["alpha_eff"] = row.alpha_eff ? json(*row.alpha_eff) : json(nullptr);
    jr["serial_fraction"] =
        row.serial_fraction ? json(*row.serial_fraction) : json(nullptr);
    jr["regime"] = to_string(row.regime);
    j["rows"].push_back(std::move(jr));
  }
  if (r.fitted) {
    j["fit"] = {{"alpha", r.fitted->model.alpha()},
                {"residual", r.fitted->residual},
                {"points", r.fitted->points_used}};
  } else {
    j["fit"] = nullptr;
  }
  return j;
}

} // namespace

std::string emit_report(const ScalingReport &report, ReportFormat format) {
  if (format == ReportFormat::Json)
    return report_json(report).dump(2) + "\n";
  return emit_reports(std::span<const ScalingReport>(&report, 1), format);
}

std::string emit_reports(std::span<const ScalingReport> reports,
                         ReportFormat format) {
  std::string out;
  switch (format) {
  case ReportFormat::Table:
    if (reports.empty())
      out += table_header();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i > 0)
        out += '\n';
      append_table(out, reports[i]);
    }
    break;
  case ReportFormat::Csv:
    out += kCsvHeader;
    for (const auto &r : reports)
      append_csv_rows(out, r);
    for (const auto &r : reports)
      if (r.fitted)
        out += "# fit " + r.label + ": alpha=" +
               format_double(r.fitted->model.alpha()) + " residual=" +
               format_double(r.fitted->residual) + "\n";
    break;
  case ReportFormat::Json: {
    json j;
    j["reports"] = json::array();
    for (const auto &r : reports)
      j["reports"].push_back(report_json(r));
    out = j.dump(2) + "\n";
    break;
  }
  }
  return out;
}

std::string_view to_string(PlotAxis axis) {
  return axis == PlotAxis::Efficiency ? "efficiency" : "serial_fraction";
}

std::string_view to_string(AxisScale scale) {
  return scale == AxisScale::Log ? "log" : "linear";
}

PlotOptions default_plot_options(PlotAxis axis) {
  if (axis == PlotAxis::Efficiency)
    return {axis, AxisScale::Log, AxisScale::Linear};
  return {axis, AxisScale::Linear, AxisScale::Log};
}

std::string emit_plot_data(std::span<const ScalingReport> reports,
                           const PlotOptions &options) {
  std::string out;
  bool first = true;
  for (const auto &r : reports) {
    if (!first)
      out += "\n\n";
    first = false;
    out += "# series: " + r.label + "\n";
    out += "# y: ";
    out += to_string(options.y_axis);
    out += "\n# xscale: ";
    out += to_string(options.xscale);
    out += "\n# yscale: ";
    out += to_string(options.yscale);
    out += '\n';
    for (const auto &row : r.rows) {
      if (options.y_axis == PlotAxis::Efficiency) {
        out += std::to_string(row.k) + ' ' + format_double(row.efficiency) +
               '\n';
      } else if (row.serial_fraction) {
        out += std::to_string(row.k) + ' ' +
               format_double(*row.serial_fraction) + '\n';
      }
    }
  }
  return out;
}

} // namespace alphaeff
