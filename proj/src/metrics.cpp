#include "alphaeff/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alphaeff/errors.hpp"

namespace alphaeff {

namespace {

void require_k(int k, int minimum, const char *op) {
  if (k < minimum)
    throw DomainError(std::string(op) + ": processor count must be >= " +
                      std::to_string(minimum) + ", got " + std::to_string(k));
}

void require_positive(double v, const char *what, const char *op) {
  if (!std::isfinite(v) || v <= 0.0)
    throw DomainError(std::string(op) + ": " + what +
                      " must be finite and > 0");
}

} // namespace

AmdahlModel::AmdahlModel(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("AmdahlModel: alpha must lie in [0, 1], got " +
                      std::to_string(alpha));
}

std::string_view to_string(ScalingRegime regime) {
  switch (regime) {
  case ScalingRegime::Normal:
    return "normal";
  case ScalingRegime::Slowdown:
    return "slowdown";
  case ScalingRegime::Superlinear:
    return "superlinear";
  }
  return "unknown";
}

ScalingRegime classify(double speedup, int k) {
  if (speedup < 1.0)
    return ScalingRegime::Slowdown;
  if (speedup > static_cast<double>(k))
    return ScalingRegime::Superlinear;
  return ScalingRegime::Normal;
}

double speedup(double t_serial, double t_parallel) {
  require_positive(t_serial, "serial time", "speedup");
  require_positive(t_parallel, "parallel time", "speedup");
  return t_serial / t_parallel;
}

double efficiency(double speedup, int k) {
  require_k(k, 1, "efficiency");
  require_positive(speedup, "speedup", "efficiency");
  return speedup / k;
}

EffectiveParallelization alpha_eff(double speedup, int k) {
  require_k(k, 2, "alpha_eff");
  require_positive(speedup, "speedup", "alpha_eff");
  const double kd = k;
  const double value = (kd / (kd - 1.0)) * ((speedup - 1.0) / speedup);
  return {value, classify(speedup, k)};
}

double karp_flatt(double speedup, int k) {
  return 1.0 - alpha_eff(speedup, k).value;
}

double amdahl_speedup(const AmdahlModel &model, int k) {
  require_k(k, 1, "amdahl_speedup");
  const double a = model.alpha();
  return 1.0 / ((1.0 - a) + a / k);
}

double amdahl_efficiency(const AmdahlModel &model, int k) {
  require_k(k, 1, "amdahl_efficiency");
  const double a = model.alpha();
  return 1.0 / (k * (1.0 - a) + a);
}

std::optional<double> half_efficiency_k(const AmdahlModel &model) {
  const double a = model.alpha();
  if (a == 1.0)
    return std::nullopt;
  return (2.0 - a) / (1.0 - a);
}

double alpha_classic(std::span<const double> sequential,
                     std::span<const double> parallel) {
  double seq = 0.0;
  double par = 0.0;
  for (double d : sequential) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw DomainError("alpha_classic: durations must be finite and >= 0");
    seq += d;
  }
  for (double d : parallel) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw DomainError("alpha_classic: durations must be finite and >= 0");
    par += d;
  }
  if (seq + par <= 0.0)
    throw DomainError("alpha_classic: all durations are zero");
  return par / (seq + par);
}

AmdahlFit fit_alpha(std::span<const SpeedupPoint> points) {
  double sxx = 0.0;
  double sxr = 0.0;
  int used = 0;
  for (const auto &p : points) {
    if (p.k < 2)
      continue;
    require_positive(p.speedup, "speedup", "fit_alpha");
    const double x = 1.0 - 1.0 / p.k;
    const double r = 1.0 - 1.0 / p.speedup;
    sxx += x * x;
    sxr += x * r;
    ++used;
  }
  if (used == 0)
    throw DomainError("fit_alpha: no points with k >= 2");

  const double alpha = std::clamp(sxr / sxx, 0.0, 1.0);
  AmdahlModel model(alpha);

  double residual = 0.0;
  for (const auto &p : points) {
    if (p.k < 2)
      continue;
    const double e = 1.0 / p.speedup - ((1.0 - alpha) + alpha / p.k);
    residual += e * e;
  }
  return {model, residual, used};
}

AmdahlFit fit_alpha(const MeasurementSeries &series) {
  const auto pts = series.speedups();
  return fit_alpha(std::span<const SpeedupPoint>(pts));
}

MetricRow make_metric_row(int k, double speedup) {
  MetricRow row;
  row.k = k;
  row.speedup = speedup;
  row.efficiency = efficiency(speedup, k);
  row.regime = classify(speedup, k);
  if (k >= 2) {
    const auto ae = alpha_eff(speedup, k);
    row.alpha_eff = ae.value;
    row.serial_fraction = 1.0 - ae.value;
  }
  return row;
}

} // namespace alphaeff
