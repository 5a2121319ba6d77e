#include "alphaeff/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "alphaeff/dataio.hpp"
#include "alphaeff/errors.hpp"
#include "alphaeff/harness.hpp"
#include "alphaeff/metrics.hpp"
#include "alphaeff/timeline.hpp"

namespace alphaeff::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kFixtureScheme = "fixtures://";

/// Invalid flag combination or value detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string read_source(const std::string &path, std::istream &in) {
  if (path == "-") {
    std::string text(std::istreambuf_iterator<char>(in), {});
    if (in.bad())
      throw IoError("failed to read standard input");
    return text;
  }
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw IoError("cannot open '" + path + "'");
  std::string text(std::istreambuf_iterator<char>(file), {});
  if (file.bad())
    throw IoError("failed to read '" + path + "'");
  return text;
}

void write_output(const std::string &path, const std::string &text,
                  std::ostream &out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw IoError("cannot write '" + path + "'");
  file << text;
  if (!file)
    throw IoError("failed to write '" + path + "'");
}

bool is_fixture_uri(const std::string &s) { return s.starts_with(kFixtureScheme); }

std::string fixture_id(const std::string &uri) {
  return uri.substr(kFixtureScheme.size());
}

ReportFormat report_format(const std::string &s) {
  if (s == "csv")
    return ReportFormat::Csv;
  if (s == "json")
    return ReportFormat::Json;
  return ReportFormat::Table;
}

AxisScale axis_scale(const std::string &s) {
  return s == "log" ? AxisScale::Log : AxisScale::Linear;
}

std::vector<double> split_range(const std::string &text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw UsageError("range '" + text + "' must look like LO:HI");
  try {
    std::size_t used = 0;
    const double lo = std::stod(text.substr(0, colon), &used);
    const auto hi_text = text.substr(colon + 1);
    std::size_t used_hi = 0;
    const double hi = std::stod(hi_text, &used_hi);
    if (used != colon || used_hi != hi_text.size())
      throw std::invalid_argument("trailing text");
    return {lo, hi};
  } catch (const std::logic_error &) {
    throw UsageError("range '" + text + "' must look like LO:HI");
  }
}

std::vector<int> split_ints(const std::string &text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size())
        throw std::invalid_argument("trailing text");
    } catch (const std::logic_error &) {
      throw UsageError("'" + text + "' must be a comma-separated integer list");
    }
  }
  if (out.empty())
    throw UsageError("empty integer list");
  return out;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::vector<std::string> inputs;
  std::string format = "table";
  std::string input_format = "auto";
  bool fit = false;
  std::string plot;
  std::string plot_out;
  std::string xscale;
  std::string yscale;
  std::string output;
};

int cmd_analyze(const AnalyzeArgs &a, std::istream &in, std::ostream &out,
                std::ostream &err) {
  if (!a.plot.empty() && a.plot_out.empty() && a.format != "table")
    throw UsageError("--plot with --format " + a.format +
                     " needs --plot-out so the outputs do not mix");

  std::vector<ScalingReport> reports;
  std::optional<AxisScale> fixture_sf_xscale;
  std::vector<MeasurementSeries> measured;
  for (const auto &input : a.inputs) {
    if (is_fixture_uri(input)) {
      const auto fx = load_fixture(fixture_id(input));
      if (!fx.verifiable)
        err << "warning: fixture '" << fx.id
            << "' publishes only 1-alpha_eff; rows are reconstructed from "
               "those values\n";
      auto r = analyze_fixture(fx);
      reports.insert(reports.end(), r.begin(), r.end());
      fixture_sf_xscale = fx.serial_fraction_xscale;
      continue;
    }
    const auto text = read_source(input, in);
    InputFormat fmt = a.input_format == "json"  ? InputFormat::Json
                      : a.input_format == "csv" ? InputFormat::Csv
                                                : sniff_format(text);
    auto parsed = parse_measurements(text, fmt);
    for (const auto &w : parsed.warnings)
      err << "warning: " << input << ": " << w << "\n";
    for (const auto &s : parsed.series)
      reports.push_back(analyze(s));
  }

  for (auto &r : reports) {
    if (!a.fit) {
      r.fitted.reset();
    } else if (!r.fitted) {
      const bool usable = std::any_of(r.rows.begin(), r.rows.end(),
                                      [](const MetricRow &m) { return m.k >= 2; });
      if (usable) {
        std::vector<SpeedupPoint> pts;
        for (const auto &m : r.rows)
          pts.push_back({m.k, m.speedup});
        r.fitted = fit_alpha(std::span<const SpeedupPoint>(pts));
      }
    }
  }

  std::string text = emit_reports(reports, report_format(a.format));

  if (!a.plot.empty()) {
    std::vector<PlotAxis> axes;
    if (a.plot == "efficiency" || a.plot == "both")
      axes.push_back(PlotAxis::Efficiency);
    if (a.plot == "serial-fraction" || a.plot == "both")
      axes.push_back(PlotAxis::SerialFraction);
    std::string plot;
    for (auto axis : axes) {
      auto opts = default_plot_options(axis);
      if (axis == PlotAxis::SerialFraction && fixture_sf_xscale)
        opts.xscale = *fixture_sf_xscale;
      if (!a.xscale.empty())
        opts.xscale = axis_scale(a.xscale);
      if (!a.yscale.empty())
        opts.yscale = axis_scale(a.yscale);
      if (!plot.empty())
        plot += "\n\n";
      plot += emit_plot_data(reports, opts);
    }
    if (a.plot_out.empty())
      text += "\n" + plot;
    else
      write_output(a.plot_out, plot, out);
  }
  write_output(a.output, text, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  int k = 1;
  std::string policy = "round-robin";
  std::string assign;
  std::string format = "table";
};

std::string bar(double busy, double max_load, int width = 20) {
  const int filled =
      max_load > 0.0
          ? static_cast<int>(std::lround(busy / max_load * width))
          : 0;
  return std::string(static_cast<std::size_t>(filled), '#') +
         std::string(static_cast<std::size_t>(width - filled), '.');
}

int cmd_simulate(const SimulateArgs &a, std::istream &in, std::ostream &out,
                 std::ostream &err) {
  if (a.policy == "explicit" && a.assign.empty())
    throw UsageError("--policy explicit needs --assign");
  if (a.policy != "explicit" && !a.assign.empty())
    throw UsageError("--assign is only valid with --policy explicit");

  const std::string text =
      is_fixture_uri(a.scenario)
          ? std::string(scenario_json(fixture_id(a.scenario)))
          : read_source(a.scenario, in);
  const Timeline timeline = parse_timeline_json(text);

  AssignmentPolicy policy = RoundRobin{};
  if (a.policy == "lpt") {
    policy = LongestProcessingTimeFirst{};
  } else if (a.policy == "explicit") {
    ExplicitAssignment e;
    for (int p : split_ints(a.assign)) {
      if (p < 0)
        throw UsageError("--assign entries must be >= 0");
      e.processor_of.push_back(static_cast<std::size_t>(p));
    }
    policy = e;
  }

  const auto r = simulate(timeline, a.k, policy);
  const auto regime =
      r.alpha_eff ? r.alpha_eff->regime : classify(r.speedup, a.k);
  if (regime != ScalingRegime::Normal)
    err << "warning: speedup " << format_double(r.speedup) << " on " << a.k
        << " processor(s) is flagged as " << to_string(regime) << "\n";

  const double max_load = *std::max_element(r.per_processor_busy.begin(),
                                            r.per_processor_busy.end());
  if (a.format == "json") {
    json j;
    j["k"] = a.k;
    j["policy"] = a.policy;
    j["t_total"] = r.t_total;
    j["t_serial"] = r.t_serial;
    j["speedup"] = r.speedup;
    j["alpha_eff"] = r.alpha_eff ? json(r.alpha_eff->value) : json(nullptr);
    j["regime"] = to_string(regime);
    j["processors"] = json::array();
    for (std::size_t p = 0; p < r.per_processor_busy.size(); ++p) {
      json jp;
      jp["index"] = p;
      jp["busy"] = r.per_processor_busy[p];
      jp["wait"] = r.per_processor_wait[p];
      jp["chunks"] = json::array();
      for (std::size_t c = 0; c < r.assignment.size(); ++c)
        if (r.assignment[c] == p)
          jp["chunks"].push_back(c);
      j["processors"].push_back(std::move(jp));
    }
    out << j.dump(2) << "\n";
    return kSuccess;
  }

  out << "k:          " << a.k << "\n";
  out << "policy:     " << a.policy << "\n";
  out << "t_total:    " << format_double(r.t_total) << "\n";
  out << "t_serial:   " << format_double(r.t_serial) << "\n";
  out << "speedup:    " << format_double(r.speedup) << "\n";
  out << "alpha_eff:  "
      << (r.alpha_eff ? format_double(r.alpha_eff->value) : "-") << "\n";
  out << "regime:     " << to_string(regime) << "\n";
  out << "parallel phase (busy '#', waiting '.'):\n";
  for (std::size_t p = 0; p < r.per_processor_busy.size(); ++p) {
    out << "  P" << p << "  " << bar(r.per_processor_busy[p], max_load)
        << "  busy " << format_double(r.per_processor_busy[p]) << "  wait "
        << format_double(r.per_processor_wait[p]) << "\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// surface
// ---------------------------------------------------------------------------

struct SurfaceArgs {
  int k = 3;
  double chunk = 0.25;
  std::string seq_range = "0:0.8";
  std::string overhead_range = "0:0.6";
  int steps = 11;
  std::string format = "plot";
  std::string output;
};

int cmd_surface(const SurfaceArgs &a, std::ostream &out) {
  const auto s = split_range(a.seq_range);
  const auto o = split_range(a.overhead_range);
  const auto grid =
      sweep_surface({s[0], s[1]}, {o[0], o[1]}, a.steps, a.k, a.chunk);

  std::string text;
  if (a.format == "json") {
    json j;
    j["k"] = grid.k;
    j["chunk_time"] = grid.chunk_time;
    j["seq_axis"] = grid.seq_axis;
    j["overhead_axis"] = grid.overhead_axis;
    json rows = json::array();
    for (std::size_t i = 0; i < grid.seq_axis.size(); ++i) {
      json row = json::array();
      for (std::size_t jx = 0; jx < grid.overhead_axis.size(); ++jx)
        row.push_back(grid.at(i, jx));
      rows.push_back(std::move(row));
    }
    j["alpha_eff"] = std::move(rows);
    text = j.dump(2) + "\n";
  } else {
    for (std::size_t i = 0; i < grid.seq_axis.size(); ++i) {
      if (i > 0)
        text += "\n\n";
      text += "# series: seq_time=" + format_double(grid.seq_axis[i]) + "\n";
      text += "# x: overhead_fraction\n# y: alpha_eff\n";
      text += "# k: " + std::to_string(grid.k) +
              "\n# chunk_time: " + format_double(grid.chunk_time) + "\n";
      text += "# xscale: linear\n# yscale: linear\n";
      for (std::size_t jx = 0; jx < grid.overhead_axis.size(); ++jx)
        text += format_double(grid.overhead_axis[jx]) + ' ' +
                format_double(grid.at(i, jx)) + '\n';
    }
  }
  write_output(a.output, text, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string spec;
  double alpha = 0.8;
  double total_ms = 200.0;
  double overhead = 0.0;
  std::string k_list = "1,2,4";
  int reps = 3;
  int max_workers = 0;
  std::string label;
  std::string format = "csv";
  std::string output;
};

int cmd_bench(const BenchArgs &a, const CLI::App &sub, std::istream &in,
              std::ostream &out, std::ostream &err) {
  SyntheticWorkload w;
  if (!a.spec.empty())
    w = parse_workload_json(read_source(a.spec, in));
  if (a.spec.empty() || sub.count("--alpha"))
    w.alpha_target = a.alpha;
  if (a.spec.empty() || sub.count("--total-ms"))
    w.total_ms = a.total_ms;
  if (a.spec.empty() || sub.count("--overhead"))
    w.overhead_fraction = a.overhead;
  if (a.spec.empty() || sub.count("--k"))
    w.k_list = split_ints(a.k_list);
  if (a.spec.empty() || sub.count("--reps"))
    w.repetitions = a.reps;

  HarnessOptions opts;
  opts.max_workers = a.max_workers;
  opts.label = a.label;

  const int cpus = available_processors();
  for (int k : normalized_k_list(w, opts))
    if (k > cpus) {
      err << "warning: k=" << k << " oversubscribes the " << cpus
          << " available processor(s)\n";
      break;
    }

  const auto series = run_synthetic(w, opts);
  std::string text;
  if (a.format == "table")
    text = emit_report(analyze(series), ReportFormat::Table);
  else
    text = emit_measurements(std::span<const MeasurementSeries>(&series, 1),
                             a.format == "json" ? InputFormat::Json
                                                : InputFormat::Csv);
  write_output(a.output, text, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

json fixture_json(const Fixture &fx) {
  json j;
  j["id"] = fx.id;
  j["description"] = fx.description;
  j["verifiable"] = fx.verifiable;
  j["series"] = json::parse(
      emit_measurements(fx.series, InputFormat::Json))["series"];
  j["published_serial_fraction"] = json::array();
  for (const auto &p : fx.published) {
    json jp;
    jp["label"] = p.label;
    jp["points"] = json::array();
    for (const auto &o : p.points)
      jp["points"].push_back({{"k", o.k}, {"value", o.value}});
    j["published_serial_fraction"].push_back(std::move(jp));
  }
  return j;
}

int cmd_fixtures_list(const std::string &format, std::ostream &out) {
  if (format == "json") {
    json j = json::array();
    for (const auto &id : fixture_ids())
      j.push_back({{"id", id}, {"description", load_fixture(id).description}});
    out << j.dump(2) << "\n";
    return kSuccess;
  }
  for (const auto &id : fixture_ids())
    out << id << "\n";
  return kSuccess;
}

int cmd_fixtures_show(const std::string &id, const std::string &format,
                      std::ostream &out) {
  const auto fx = load_fixture(id);
  const auto checks = check_fixture(fx);
  if (format == "json") {
    json j = fixture_json(fx);
    j["consistency"] = json::array();
    for (const auto &c : checks)
      j["consistency"].push_back({{"label", c.label},
                                  {"k", c.k},
                                  {"published", c.published},
                                  {"recomputed", c.recomputed},
                                  {"exempt", c.exempt},
                                  {"ok", c.ok}});
    out << j.dump(2) << "\n";
    return kSuccess;
  }
  out << "id:          " << fx.id << "\n";
  out << "description: " << fx.description << "\n";
  out << "verifiable:  " << (fx.verifiable ? "yes" : "no") << "\n";
  out << "series:\n";
  for (const auto &s : fx.series)
    out << "  " << s.label() << " (" << to_string(s.kind()) << ", "
        << s.points().size() << " points)\n";
  for (const auto &p : fx.published)
    out << "  " << p.label << " (published 1-alpha_eff, " << p.points.size()
        << " points)\n";
  if (!checks.empty()) {
    out << "consistency (recomputed vs published 1-alpha_eff):\n";
    for (const auto &c : checks) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-16s k=%-5d %-10.6g %-10.6g %s\n",
                    c.label.c_str(), c.k, c.recomputed, c.published,
                    c.exempt ? "exempt" : (c.ok ? "ok" : "MISMATCH"));
      out << line;
    }
  }
  return kSuccess;
}

int cmd_fixtures_export(const std::string &id, const std::string &format,
                        const std::string &output, std::ostream &out) {
  if (format == "json")
    write_output(output, fixture_json(load_fixture(id)).dump(2) + "\n", out);
  else
    write_output(output, std::string(fixture_csv(id)), out);
  return kSuccess;
}

} // namespace

int run(const std::vector<std::string> &args, std::istream &in,
        std::ostream &out, std::ostream &err) {
  CLI::App app{"Effective parallelization (alpha_eff) toolkit: scaling "
               "analysis, fork-join simulation, surface sweeps, synthetic "
               "benchmarks"};
  app.name("alphaeff");
  app.require_subcommand(1, 1);

  const std::vector<std::string> report_formats{"table", "csv", "json"};

  AnalyzeArgs aa;
  auto *analyze_cmd = app.add_subcommand(
      "analyze", "Compute speedup, efficiency and alpha_eff per point");
  analyze_cmd
      ->add_option("inputs", aa.inputs,
                   "Measurement files, '-' for stdin, or fixtures://<id>")
      ->required();
  analyze_cmd->add_option("--format", aa.format, "Output format")
      ->check(CLI::IsMember(report_formats))
      ->capture_default_str();
  analyze_cmd->add_option("--input-format", aa.input_format, "Input format")
      ->check(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
  analyze_cmd->add_flag("--fit", aa.fit, "Fit Amdahl's alpha by least squares");
  analyze_cmd
      ->add_option("--plot", aa.plot, "Also emit plot data for this y axis")
      ->check(CLI::IsMember({"efficiency", "serial-fraction", "both"}));
  analyze_cmd->add_option("--plot-out", aa.plot_out,
                          "Write plot data to this file");
  analyze_cmd->add_option("--xscale", aa.xscale, "Override the x scale hint")
      ->check(CLI::IsMember({"linear", "log"}));
  analyze_cmd->add_option("--yscale", aa.yscale, "Override the y scale hint")
      ->check(CLI::IsMember({"linear", "log"}));
  analyze_cmd->add_option("-o,--output", aa.output, "Output file");

  SimulateArgs sa;
  auto *simulate_cmd = app.add_subcommand(
      "simulate", "Run a timeline scenario on k processors");
  simulate_cmd
      ->add_option("scenario", sa.scenario,
                   "Scenario JSON, '-' for stdin, or fixtures://classic|"
                   "realistic")
      ->required();
  simulate_cmd->add_option("--k", sa.k, "Processor count")->required();
  simulate_cmd->add_option("--policy", sa.policy, "Chunk assignment")
      ->check(CLI::IsMember({"round-robin", "lpt", "explicit"}))
      ->capture_default_str();
  simulate_cmd->add_option("--assign", sa.assign,
                           "Processor of each chunk, e.g. 0,1,2");
  simulate_cmd->add_option("--format", sa.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  SurfaceArgs fa;
  auto *surface_cmd = app.add_subcommand(
      "surface", "Sweep alpha_eff over sequential time and overhead ratio");
  surface_cmd->add_option("--k", fa.k, "Processor count")->capture_default_str();
  surface_cmd->add_option("--chunk", fa.chunk, "Chunk duration")
      ->capture_default_str();
  surface_cmd->add_option("--seq-range", fa.seq_range, "LO:HI")
      ->capture_default_str();
  surface_cmd->add_option("--overhead-range", fa.overhead_range, "LO:HI")
      ->capture_default_str();
  surface_cmd->add_option("--steps", fa.steps, "Samples per axis")
      ->capture_default_str();
  surface_cmd->add_option("--format", fa.format, "Output format")
      ->check(CLI::IsMember({"plot", "json"}))
      ->capture_default_str();
  surface_cmd->add_option("-o,--output", fa.output, "Output file");

  BenchArgs ba;
  auto *bench_cmd = app.add_subcommand(
      "bench", "Measure a synthetic workload on this machine");
  bench_cmd->add_option("--spec", ba.spec,
                        "Workload JSON {alpha,total_ms,overhead,k_list,reps}");
  bench_cmd->add_option("--alpha", ba.alpha, "Parallelizable fraction")
      ->capture_default_str();
  bench_cmd->add_option("--total-ms", ba.total_ms, "Serial work in ms")
      ->capture_default_str();
  bench_cmd->add_option("--overhead", ba.overhead,
                        "Control work per chunk, relative to the chunk "
                        "(Amdahl quoted 0.2 to 0.4)")
      ->capture_default_str();
  bench_cmd->add_option("--k", ba.k_list, "Worker counts")
      ->capture_default_str();
  bench_cmd->add_option("--reps", ba.reps, "Repetitions per k (minimum kept)")
      ->capture_default_str();
  bench_cmd->add_option("--max-workers", ba.max_workers,
                        "Worker cap (default 4 x available processors)");
  bench_cmd->add_option("--label", ba.label, "Series label");
  bench_cmd->add_option("--format", ba.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "table"}))
      ->capture_default_str();
  bench_cmd->add_option("-o,--output", ba.output, "Output file");

  std::string fixtures_format = "table";
  std::string fixture_arg;
  std::string fixtures_output;
  auto *fixtures_cmd =
      app.add_subcommand("fixtures", "Bundled published scaling data");
  fixtures_cmd->require_subcommand(1, 1);
  fixtures_cmd->add_option("--format", fixtures_format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  auto *list_cmd = fixtures_cmd->add_subcommand("list", "List fixture ids");
  auto *show_cmd = fixtures_cmd->add_subcommand("show", "Describe a fixture");
  show_cmd->add_option("id", fixture_arg, "Fixture id")->required();
  auto *export_cmd =
      fixtures_cmd->add_subcommand("export", "Write a fixture's bundled data");
  export_cmd->add_option("id", fixture_arg, "Fixture id")->required();
  export_cmd->add_option("-o,--output", fixtures_output, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }

  try {
    if (analyze_cmd->parsed())
      return cmd_analyze(aa, in, out, err);
    if (simulate_cmd->parsed())
      return cmd_simulate(sa, in, out, err);
    if (surface_cmd->parsed())
      return cmd_surface(fa, out);
    if (bench_cmd->parsed())
      return cmd_bench(ba, *bench_cmd, in, out, err);
    if (list_cmd->parsed())
      return cmd_fixtures_list(fixtures_format, out);
    if (show_cmd->parsed())
      return cmd_fixtures_show(fixture_arg, fixtures_format, out);
    if (export_cmd->parsed())
      return cmd_fixtures_export(fixture_arg, fixtures_format, fixtures_output,
                                 out);
  } catch (const IoError &e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const HarnessError &e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const DomainError &e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }
  return kValidationError;
}

} // namespace alphaeff::cli
