#include "alphaeff/series.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "alphaeff/errors.hpp"

namespace alphaeff {

std::string_view to_string(ValueKind kind) {
  switch (kind) {
  case ValueKind::WallTime:
    return "time";
  case ValueKind::Speedup:
    return "speedup";
  case ValueKind::Efficiency:
    return "efficiency";
  }
  return "unknown";
}

ValueKind parse_value_kind(std::string_view text) {
  if (text == "time")
    return ValueKind::WallTime;
  if (text == "speedup")
    return ValueKind::Speedup;
  if (text == "efficiency")
    return ValueKind::Efficiency;
  throw ParseError("unknown value kind '" + std::string(text) +
                   "' (expected time, speedup or efficiency)");
}

MeasurementSeries::MeasurementSeries(std::string label, ValueKind kind,
                                     std::vector<Observation> points,
                                     int baseline_k)
    : label_(std::move(label)), kind_(kind), points_(std::move(points)),
      baseline_k_(baseline_k) {
  if (baseline_k_ < 1)
    throw DomainError("series '" + label_ + "': baseline_k must be >= 1");
  std::set<int> seen;
  for (const auto &p : points_) {
    if (p.k < 1)
      throw DomainError("series '" + label_ + "': processor count " +
                        std::to_string(p.k) + " is below 1");
    if (!seen.insert(p.k).second)
      throw DomainError("series '" + label_ + "': duplicate processor count " +
                        std::to_string(p.k));
    if (!std::isfinite(p.value) || p.value <= 0.0)
      throw DomainError("series '" + label_ + "': value at k=" +
                        std::to_string(p.k) + " must be finite and > 0");
  }
  if (kind_ == ValueKind::WallTime && !points_.empty() &&
      !seen.contains(baseline_k_))
    throw DomainError("series '" + label_ + "': wall-time series has no " +
                      "baseline point at k=" + std::to_string(baseline_k_));
}

std::vector<SpeedupPoint> MeasurementSeries::speedups() const {
  std::vector<SpeedupPoint> out;
  out.reserve(points_.size());

  double baseline_time = 0.0;
  if (kind_ == ValueKind::WallTime) {
    auto it = std::find_if(points_.begin(), points_.end(),
                           [&](const Observation &p) {
                             return p.k == baseline_k_;
                           });
    baseline_time = it->value;
  }

  for (const auto &p : points_) {
    double s = p.value;
    switch (kind_) {
    case ValueKind::WallTime:
      s = baseline_time / p.value;
      break;
    case ValueKind::Efficiency:
      s = p.value * p.k;
      break;
    case ValueKind::Speedup:
      break;
    }
    out.push_back({p.k, s});
  }
  std::sort(out.begin(), out.end(),
            [](const SpeedupPoint &a, const SpeedupPoint &b) {
              return a.k < b.k;
            });
  return out;
}

} // namespace alphaeff
