#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace alphaeff {

enum class ValueKind { WallTime, Speedup, Efficiency };

/// CSV/JSON spelling: "time", "speedup", "efficiency".
std::string_view to_string(ValueKind kind);
/// Throws ParseError on an unknown spelling.
ValueKind parse_value_kind(std::string_view text);

struct Observation {
  int k = 1;
  double value = 0.0;

  friend bool operator==(const Observation &, const Observation &) = default;
};

struct SpeedupPoint {
  int k = 1;
  double speedup = 1.0;
};

/// A labeled strong-scaling measurement: one value per processor count.
///
/// Construction validates the invariants: every k >= 1 and unique, every
/// value finite and > 0, and for wall times a point at `baseline_k`.
/// Points are kept in the order given.
class MeasurementSeries {
public:
  MeasurementSeries(std::string label, ValueKind kind,
                    std::vector<Observation> points, int baseline_k = 1);

  const std::string &label() const noexcept { return label_; }
  ValueKind kind() const noexcept { return kind_; }
  int baseline_k() const noexcept { return baseline_k_; }
  const std::vector<Observation> &points() const noexcept { return points_; }

  /// Speedup per point, sorted by ascending k.
  /// WallTime: t(baseline_k) / t(k); Efficiency: eff * k; Speedup: as is.
  std::vector<SpeedupPoint> speedups() const;

  friend bool operator==(const MeasurementSeries &,
                         const MeasurementSeries &) = default;

private:
  std::string label_;
  ValueKind kind_;
  std::vector<Observation> points_;
  int baseline_k_;
};

} // namespace alphaeff
