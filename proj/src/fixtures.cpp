#include <algorithm>
#include <cmath>
#include <iterator>

#include "alphaeff/dataio.hpp"
#include "alphaeff/errors.hpp"
#include "csv.hpp"

namespace alphaeff {

namespace {

// Values are read back from plotted coordinates and carry a few percent of
// read-back error. `serial_fraction` rows are published 1 - alpha_eff.

constexpr std::string_view kAudioRadar = R"(# id: audio_radar
# description: Parallelizing compiler on audio and radar processing; efficiency per core count and published 1-alpha_eff
# verifiable: yes
# sf-xscale: linear
label,k,value,kind
Audio stream 1,1,1,efficiency
Audio stream 1,2,0.974,efficiency
Audio stream 1,3,0.685,efficiency
Audio stream 1,4,0.597,efficiency
Audio stream 1,6,0.571,efficiency
Audio stream 1,8,0.463,efficiency
Audio stream 2,1,1,efficiency
Audio stream 2,2,1,efficiency
Audio stream 2,3,0.933,efficiency
Audio stream 2,4,0.921,efficiency
Audio stream 2,6,0.778,efficiency
Audio stream 2,8,0.706,efficiency
Radar initial,1,1,efficiency
Radar initial,2,0.851,efficiency
Radar initial,4,0.556,efficiency
Radar initial,8,0.278,efficiency
Radar improved,1,1,efficiency
Radar improved,2,0.881,efficiency
Radar improved,4,0.734,efficiency
Radar improved,8,0.551,efficiency
Audio stream 1,2,0.027,serial_fraction
Audio stream 1,3,0.23,serial_fraction
Audio stream 1,4,0.226,serial_fraction
Audio stream 1,6,0.151,serial_fraction
Audio stream 1,8,0.166,serial_fraction
Audio stream 2,2,0,serial_fraction
Audio stream 2,3,0.036,serial_fraction
Audio stream 2,4,0.029,serial_fraction
Audio stream 2,6,0.057,serial_fraction
Audio stream 2,8,0.06,serial_fraction
Radar initial,2,0.174,serial_fraction
Radar initial,4,0.266,serial_fraction
Radar initial,8,0.371,serial_fraction
Radar improved,2,0.135,serial_fraction
Radar improved,4,0.121,serial_fraction
Radar improved,8,0.117,serial_fraction
)";

constexpr std::string_view kLinpackArchitectures =
    R"(# id: linpack_architectures
# description: Linpack on three shared-memory machines; efficiency per processor count and published 1-alpha_eff
# verifiable: yes
# sf-xscale: linear
label,k,value,kind
Cray Y-MP/8,1,1,efficiency
Cray Y-MP/8,2,0.975,efficiency
Cray Y-MP/8,3,0.96,efficiency
Cray Y-MP/8,4,0.94,efficiency
Cray Y-MP/8,8,0.87,efficiency
IBM-3090,1,1,efficiency
IBM-3090,2,0.995,efficiency
IBM-3090,3,0.987,efficiency
IBM-3090,4,0.963,efficiency
IBM-3090,5,0.956,efficiency
IBM-3090,6,0.94,efficiency
Alliant FX/80,1,1,efficiency
Alliant FX/80,2,0.97,efficiency
Alliant FX/80,3,0.93,efficiency
Alliant FX/80,4,0.89,efficiency
Alliant FX/80,5,0.848,efficiency
Alliant FX/80,6,0.815,efficiency
Alliant FX/80,7,0.777,efficiency
Alliant FX/80,8,0.749,efficiency
Cray Y-MP/8,2,0.0256,serial_fraction
Cray Y-MP/8,3,0.0208,serial_fraction
Cray Y-MP/8,4,0.0213,serial_fraction
Cray Y-MP/8,8,0.0213,serial_fraction
IBM-3090,2,0.005,serial_fraction
IBM-3090,3,0.0068,serial_fraction
IBM-3090,4,0.013,serial_fraction
IBM-3090,5,0.0115,serial_fraction
IBM-3090,6,0.0128,serial_fraction
Alliant FX/80,2,0.0309,serial_fraction
Alliant FX/80,3,0.0376,serial_fraction
Alliant FX/80,4,0.0412,serial_fraction
Alliant FX/80,5,0.0448,serial_fraction
Alliant FX/80,6,0.0454,serial_fraction
Alliant FX/80,7,0.0478,serial_fraction
Alliant FX/80,8,0.0479,serial_fraction
)";

constexpr std::string_view kAlgorithmsScaling = R"(# id: algorithms_scaling
# description: Three algorithms on one machine up to 1024 processors; efficiency and published 1-alpha_eff
# verifiable: yes
# sf-xscale: log
label,k,value,kind
Wave Motion,1,1,efficiency
Wave Motion,4,0.997,efficiency
Wave Motion,16,0.991,efficiency
Wave Motion,64,0.969,efficiency
Wave Motion,256,0.884,efficiency
Wave Motion,1024,0.624,efficiency
Fluid dynamics,1,1,efficiency
Fluid dynamics,4,0.99,efficiency
Fluid dynamics,16,0.967,efficiency
Fluid dynamics,64,0.91,efficiency
Fluid dynamics,256,0.788,efficiency
Fluid dynamics,1024,0.507,efficiency
Beam stress,1,1,efficiency
Beam stress,4,0.989,efficiency
Beam stress,16,0.966,efficiency
Beam stress,64,0.91,efficiency
Beam stress,256,0.693,efficiency
Beam stress,1024,0.343,efficiency
Wave Motion,4,0.00117,serial_fraction
Wave Motion,16,0.00059,serial_fraction
Wave Motion,64,0.00051,serial_fraction
Wave Motion,256,0.00052,serial_fraction
Wave Motion,1024,0.00059,serial_fraction
Fluid dynamics,4,0.00345,serial_fraction
Fluid dynamics,16,0.00228,serial_fraction
Fluid dynamics,64,0.00157,serial_fraction
Fluid dynamics,256,0.00106,serial_fraction
Fluid dynamics,1024,0.00095,serial_fraction
Beam stress,4,0.00388,serial_fraction
Beam stress,16,0.00233,serial_fraction
Beam stress,64,0.00157,serial_fraction
Beam stress,256,0.00173,serial_fraction
Beam stress,1024,0.00187,serial_fraction
)";

constexpr std::string_view kSocRosenbrock = R"(# id: soc_rosenbrock
# description: Particle swarm minimizing the Rosenbrock function on one SoC with three communication strategies; published 1-alpha_eff only
# verifiable: no
# sf-xscale: log
label,k,value,kind
Ring,2,0.00688,serial_fraction
Ring,4,0.00322,serial_fraction
Ring,8,0.00281,serial_fraction
Ring,16,0.00248,serial_fraction
Ring,32,0.0024,serial_fraction
Neighbourhood,2,0.00688,serial_fraction
Neighbourhood,4,0.00494,serial_fraction
Neighbourhood,8,0.00402,serial_fraction
Neighbourhood,16,0.00334,serial_fraction
Neighbourhood,32,0.00303,serial_fraction
Broadcast,2,0.00688,serial_fraction
Broadcast,4,0.00586,serial_fraction
Broadcast,8,0.00988,serial_fraction
Broadcast,16,0.01692,serial_fraction
Broadcast,32,0.03002,serial_fraction
)";

constexpr std::string_view kSocRastrigin = R"(# id: soc_rastrigin
# description: Particle swarm minimizing the Rastrigin function on one SoC with three communication strategies; published 1-alpha_eff only
# verifiable: no
# sf-xscale: log
label,k,value,kind
Ring,2,0.00024,serial_fraction
Ring,4,0.00097,serial_fraction
Ring,8,0.00071,serial_fraction
Ring,16,0.00131,serial_fraction
Ring,32,0.00096,serial_fraction
Neighbourhood,2,0.00024,serial_fraction
Neighbourhood,4,0.00097,serial_fraction
Neighbourhood,8,0.00098,serial_fraction
Neighbourhood,16,0.00155,serial_fraction
Neighbourhood,32,0.00124,serial_fraction
Broadcast,2,0.00024,serial_fraction
Broadcast,4,0.0017,serial_fraction
Broadcast,8,0.00206,serial_fraction
Broadcast,16,0.00514,serial_fraction
Broadcast,32,0.00682,serial_fraction
)";

struct BundledFixture {
  std::string_view id;
  std::string_view csv;
};

constexpr BundledFixture kFixtures[] = {
    {"audio_radar", kAudioRadar},
    {"linpack_architectures", kLinpackArchitectures},
    {"algorithms_scaling", kAlgorithmsScaling},
    {"soc_rosenbrock", kSocRosenbrock},
    {"soc_rastrigin", kSocRastrigin},
};

std::string_view metadata(const std::vector<std::string> &comments,
                          std::string_view key) {
  for (const auto &c : comments) {
    std::string_view v = c;
    if (v.starts_with(key) && v.size() > key.size() && v[key.size()] == ':') {
      v.remove_prefix(key.size() + 1);
      while (!v.empty() && v.front() == ' ')
        v.remove_prefix(1);
      return v;
    }
  }
  return {};
}

} // namespace

std::vector<std::string> fixture_ids() {
  std::vector<std::string> out;
  for (const auto &f : kFixtures)
    out.emplace_back(f.id);
  return out;
}

std::string_view fixture_csv(std::string_view id) {
  for (const auto &f : kFixtures)
    if (f.id == id)
      return f.csv;
  throw ParseError("unknown fixture '" + std::string(id) + "'");
}

Fixture parse_fixture(std::string_view text) {
  const auto doc = detail::read_csv(text);

  Fixture fx;
  fx.id = std::string(metadata(doc.comments, "id"));
  fx.description = std::string(metadata(doc.comments, "description"));
  fx.verifiable = metadata(doc.comments, "verifiable") != "no";
  fx.serial_fraction_xscale = metadata(doc.comments, "sf-xscale") == "log"
                                  ? AxisScale::Log
                                  : AxisScale::Linear;

  // Measurement rows go through the regular reader; published rows are
  // collected separately.
  std::string measurements = "label,k,value,kind\n";
  std::vector<PublishedSerialFraction> published;
  for (const auto &row : doc.rows) {
    const auto &f = row.fields;
    if (f[3] != "serial_fraction") {
      measurements += detail::csv_field(f[0]) + ',' + f[1] + ',' + f[2] + ',' +
                      f[3] + '\n';
      continue;
    }
    const int k = detail::parse_int_field(f[1], row.line, "processor count");
    const double v = detail::parse_double_field(f[2], row.line, "value");
    if (k < 2)
      throw ParseError("serial fraction needs k >= 2", row.line);
    auto it = std::find_if(published.begin(), published.end(),
                           [&](const auto &p) { return p.label == f[0]; });
    if (it == published.end()) {
      published.push_back({f[0], {}});
      it = std::prev(published.end());
    }
    for (const auto &p : it->points)
      if (p.k == k)
        throw ParseError("duplicate serial fraction at k=" + std::to_string(k),
                         row.line);
    it->points.push_back({k, v});
  }
  fx.series = parse_measurements(measurements, InputFormat::Csv).series;
  fx.published = std::move(published);

  if (fx.verifiable) {
    for (const auto &pub : fx.published) {
      auto s = std::find_if(fx.series.begin(), fx.series.end(),
                            [&](const auto &m) { return m.label() == pub.label; });
      if (s == fx.series.end())
        throw ParseError("published serial fraction for unknown series '" +
                         pub.label + "'");
      for (const auto &p : pub.points) {
        const auto &pts = s->points();
        if (std::none_of(pts.begin(), pts.end(),
                         [&](const Observation &o) { return o.k == p.k; }))
          throw ParseError("published serial fraction for '" + pub.label +
                           "' at k=" + std::to_string(p.k) +
                           " has no measurement");
      }
    }
  }
  return fx;
}

Fixture load_fixture(std::string_view id) {
  return parse_fixture(fixture_csv(id));
}

MeasurementSeries series_from_serial_fraction(
    const PublishedSerialFraction &published) {
  std::vector<Observation> pts;
  pts.reserve(published.points.size());
  for (const auto &p : published.points) {
    const double f = p.value;
    pts.push_back({p.k, 1.0 / (f + (1.0 - f) / p.k)});
  }
  return MeasurementSeries(published.label, ValueKind::Speedup, std::move(pts));
}

std::vector<ScalingReport> analyze_fixture(const Fixture &fixture) {
  std::vector<ScalingReport> out;
  for (const auto &s : fixture.series)
    out.push_back(analyze(s));
  for (const auto &p : fixture.published) {
    const bool measured =
        std::any_of(fixture.series.begin(), fixture.series.end(),
                    [&](const auto &s) { return s.label() == p.label; });
    if (!measured)
      out.push_back(analyze(series_from_serial_fraction(p)));
  }
  return out;
}

bool within_read_back_tolerance(double recomputed, double published) {
  const double tol =
      std::max(kReadBackRelTol * std::abs(published), kReadBackAbsTol);
  return std::abs(recomputed - published) <= tol;
}

std::vector<ConsistencyEntry> check_fixture(const Fixture &fixture) {
  std::vector<ConsistencyEntry> out;
  if (!fixture.verifiable)
    return out;
  for (const auto &pub : fixture.published) {
    const auto s =
        std::find_if(fixture.series.begin(), fixture.series.end(),
                     [&](const auto &m) { return m.label() == pub.label; });
    if (s == fixture.series.end())
      continue;
    const auto speedups = s->speedups();
    for (const auto &p : pub.points) {
      const auto sp =
          std::find_if(speedups.begin(), speedups.end(),
                       [&](const SpeedupPoint &q) { return q.k == p.k; });
      ConsistencyEntry e;
      e.label = pub.label;
      e.k = p.k;
      e.published = p.value;
      e.recomputed = karp_flatt(sp->speedup, p.k);
      e.exempt = p.value == 0.0;
      e.ok = e.exempt || within_read_back_tolerance(e.recomputed, e.published);
      out.push_back(std::move(e));
    }
  }
  return out;
}

} // namespace alphaeff
