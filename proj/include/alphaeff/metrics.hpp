#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "alphaeff/series.hpp"

namespace alphaeff {

/// Amdahl's law with a single parallelizable fraction alpha in [0, 1].
class AmdahlModel {
public:
  /// Throws DomainError when alpha is outside [0, 1] or not finite.
  explicit AmdahlModel(double alpha);

  double alpha() const noexcept { return alpha_; }

private:
  double alpha_;
};

/// How a measured speedup relates to the [1, k] range Amdahl's law allows.
enum class ScalingRegime {
  Normal,      // 1 <= S <= k, alpha_eff in [0, 1]
  Slowdown,    // S < 1, alpha_eff < 0
  Superlinear, // S > k, alpha_eff > 1
};

std::string_view to_string(ScalingRegime regime);

ScalingRegime classify(double speedup, int k);

/// Effective parallelization with its regime flag. The value is never
/// clamped; anomalous measurements show up through `regime`.
struct EffectiveParallelization {
  double value = 0.0;
  ScalingRegime regime = ScalingRegime::Normal;
};

double speedup(double t_serial, double t_parallel);

double efficiency(double speedup, int k);

/// (k / (k - 1)) * (S - 1) / S. Requires k >= 2 and S > 0.
EffectiveParallelization alpha_eff(double speedup, int k);

/// Karp-Flatt experimentally determined serial fraction, 1 - alpha_eff.
double karp_flatt(double speedup, int k);

/// 1 / ((1 - alpha) + alpha / k).
double amdahl_speedup(const AmdahlModel &model, int k);

/// S / k under Amdahl's law, 1 / (k (1 - alpha) + alpha).
double amdahl_efficiency(const AmdahlModel &model, int k);

/// Processor count at which amdahl_efficiency drops to 0.5, i.e.
/// (2 - alpha) / (1 - alpha). Returns std::nullopt for alpha == 1, where the
/// efficiency never degrades.
std::optional<double> half_efficiency_k(const AmdahlModel &model);

/// Nominal Amdahl fraction sum(P) / (sum(S) + sum(P)) of a segment split.
double alpha_classic(std::span<const double> sequential,
                     std::span<const double> parallel);

struct AmdahlFit {
  AmdahlModel model;
  /// Sum of squared residuals of 1/S against (1 - alpha) + alpha / k.
  double residual;
  /// Number of points with k >= 2 that entered the fit.
  int points_used;
};

/// Least-squares fit of Amdahl's law in its linear form 1/S = 1 - alpha x,
/// x = 1 - 1/k, over the points with k >= 2, constrained to alpha in [0, 1].
///
/// The unconstrained optimum is sum(x r) / sum(x^2) with r = 1 - 1/S; the
/// objective is a convex parabola in alpha so clamping gives the constrained
/// optimum. Throws DomainError when no point has k >= 2.
AmdahlFit fit_alpha(std::span<const SpeedupPoint> points);
AmdahlFit fit_alpha(const MeasurementSeries &series);

/// One row of a scaling report. `alpha_eff` and `serial_fraction` are empty
/// at k = 1 where the effective parallelization is undefined.
struct MetricRow {
  int k = 1;
  double speedup = 1.0;
  double efficiency = 1.0;
  std::optional<double> alpha_eff;
  std::optional<double> serial_fraction;
  ScalingRegime regime = ScalingRegime::Normal;
};

MetricRow make_metric_row(int k, double speedup);

} // namespace alphaeff
