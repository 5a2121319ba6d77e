#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "alphaeff/series.hpp"

namespace alphaeff {

/// Thread creation or re-entrancy failure while measuring.
class HarnessError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A synthetic strong-scaling job following Amdahl's model: a serial part of
/// (1 - alpha) * total work, then alpha * total work split into k equal
/// chunks on k threads, each chunk preceded by overhead * chunk of serial
/// control work on the launching thread.
struct SyntheticWorkload {
  double alpha_target = 0.8;
  double total_ms = 200.0;
  double overhead_fraction = 0.0;
  std::vector<int> k_list{1, 2, 4};
  int repetitions = 3;
};

/// Overhead range Amdahl quoted for data housekeeping, offered as presets.
inline constexpr double kAmdahlOverheadLow = 0.2;
inline constexpr double kAmdahlOverheadHigh = 0.4;

struct HarnessOptions {
  /// Largest k accepted; 0 means 4 x available_processors().
  int max_workers = 0;
  /// Series label; generated from the workload when empty.
  std::string label;
};

/// Processors usable by this process (at least 1).
int available_processors();

/// Deterministic integer busy work. The returned accumulator must be
/// consumed so the loop is not optimized away.
std::uint64_t spin_work(std::uint64_t iterations);

/// spin_work iteration count that takes about `target` on this host.
/// Throws DomainError when target <= 0 or too short for the clock.
std::uint64_t calibrate(std::chrono::duration<double> target);

/// Validates the workload and returns the k list that will be measured:
/// k = 1 prepended when missing, order otherwise kept, duplicates dropped.
/// Throws DomainError on invalid fields or k above the worker cap.
std::vector<int> normalized_k_list(const SyntheticWorkload &workload,
                                   const HarnessOptions &options = {});

/// Measures the workload once per k (minimum wall time over the
/// repetitions) and returns a WallTime series in milliseconds with baseline
/// k = 1. Not re-entrant: a concurrent call throws HarnessError.
MeasurementSeries run_synthetic(const SyntheticWorkload &workload,
                                const HarnessOptions &options = {});

/// {"alpha", "total_ms", "overhead", "k_list", "reps"}; every key optional,
/// defaults as in SyntheticWorkload. Throws ParseError.
SyntheticWorkload parse_workload_json(std::string_view text);

} // namespace alphaeff
