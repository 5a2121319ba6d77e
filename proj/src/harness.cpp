#include "alphaeff/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <system_error>
#include <thread>

#include <json.hpp>

#include "alphaeff/dataio.hpp"
#include "alphaeff/errors.hpp"

namespace alphaeff {

namespace {

using Clock = std::chrono::steady_clock;
using Seconds = std::chrono::duration<double>;

volatile std::uint64_t g_sink = 0;

std::atomic<bool> g_running{false};

Seconds clock_granularity() {
  auto best = Seconds::max();
  for (int i = 0; i < 16; ++i) {
    const auto t0 = Clock::now();
    auto t1 = Clock::now();
    while (t1 == t0)
      t1 = Clock::now();
    best = std::min(best, Seconds(t1 - t0));
  }
  return best;
}

Seconds time_spin(std::uint64_t iterations) {
  const auto t0 = Clock::now();
  g_sink = g_sink + spin_work(iterations);
  return Clock::now() - t0;
}

std::uint64_t to_iterations(double x) {
  return x <= 0.0 ? 0 : static_cast<std::uint64_t>(std::llround(x));
}

} // namespace

int available_processors() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::uint64_t spin_work(std::uint64_t iterations) {
  std::uint64_t x = 0x9E3779B97F4A7C15ull ^ iterations;
  std::uint64_t acc = 0;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    acc += x;
  }
  return acc;
}

std::uint64_t calibrate(std::chrono::duration<double> target) {
  if (!(target.count() > 0.0))
    throw DomainError("calibrate: target duration must be > 0");
  const Seconds granularity = clock_granularity();
  if (target < granularity * 1000.0)
    throw DomainError("calibrate: target duration is below the resolvable "
                      "range of the clock (granularity " +
                      std::to_string(granularity.count() * 1e9) + " ns)");

  // Grow the probe until it runs long enough to time reliably, then take the
  // fastest of a few runs as the rate.
  const Seconds probe = std::clamp(Seconds(target), granularity * 1000.0,
                                   Seconds(0.02));
  std::uint64_t n = 1024;
  Seconds elapsed = time_spin(n);
  while (elapsed < probe) {
    n *= 2;
    elapsed = time_spin(n);
  }
  for (int i = 0; i < 2; ++i)
    elapsed = std::min(elapsed, time_spin(n));

  const double rate = static_cast<double>(n) / elapsed.count();
  return std::max<std::uint64_t>(1, to_iterations(rate * target.count()));
}

std::vector<int> normalized_k_list(const SyntheticWorkload &w,
                                   const HarnessOptions &options) {
  if (!(w.alpha_target >= 0.0 && w.alpha_target <= 1.0))
    throw DomainError("workload: alpha must lie in [0, 1]");
  if (!(w.total_ms > 0.0) || !std::isfinite(w.total_ms))
    throw DomainError("workload: total_ms must be > 0");
  if (!(w.overhead_fraction >= 0.0) || !std::isfinite(w.overhead_fraction))
    throw DomainError("workload: overhead must be >= 0");
  if (w.repetitions < 1)
    throw DomainError("workload: repetitions must be >= 1");

  const int cap =
      options.max_workers > 0 ? options.max_workers : 4 * available_processors();
  std::vector<int> ks{1};
  for (int k : w.k_list) {
    if (k < 1)
      throw DomainError("workload: processor counts must be >= 1");
    if (k > cap)
      throw DomainError("workload: k=" + std::to_string(k) +
                        " exceeds the worker cap of " + std::to_string(cap));
    if (std::find(ks.begin(), ks.end(), k) == ks.end())
      ks.push_back(k);
  }
  return ks;
}

MeasurementSeries run_synthetic(const SyntheticWorkload &w,
                                const HarnessOptions &options) {
  const auto ks = normalized_k_list(w, options);

  if (g_running.exchange(true))
    throw HarnessError("run_synthetic is already running");
  struct Reset {
    ~Reset() { g_running = false; }
  } reset;

  const std::uint64_t total =
      calibrate(std::chrono::duration<double, std::milli>(w.total_ms));
  const double a = w.alpha_target;
  const std::uint64_t serial_iters = to_iterations((1.0 - a) * total);

  std::vector<Observation> points;
  for (int k : ks) {
    const double chunk = a * static_cast<double>(total) / k;
    const std::uint64_t chunk_iters = to_iterations(chunk);
    const std::uint64_t control_iters =
        to_iterations(w.overhead_fraction * chunk);

    auto best = Seconds::max();
    for (int rep = 0; rep < w.repetitions; ++rep) {
      std::vector<std::uint64_t> results(static_cast<std::size_t>(k), 0);
      const auto t0 = Clock::now();
      std::uint64_t acc = spin_work(serial_iters);
      {
        std::vector<std::jthread> workers;
        workers.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
          acc += spin_work(control_iters);
          try {
            workers.emplace_back([&results, i, chunk_iters] {
              results[static_cast<std::size_t>(i)] = spin_work(chunk_iters);
            });
          } catch (const std::system_error &e) {
            throw HarnessError(std::string("failed to start worker: ") +
                               e.what());
          }
        }
      } // joins
      const auto t1 = Clock::now();
      for (auto r : results)
        acc += r;
      g_sink = g_sink + acc;
      best = std::min(best, Seconds(t1 - t0));
    }
    points.push_back({k, best.count() * 1e3});
  }

  std::string label = options.label;
  if (label.empty()) {
    label = "synthetic alpha=" + format_double(a) +
            " overhead=" + format_double(w.overhead_fraction);
  }
  return MeasurementSeries(std::move(label), ValueKind::WallTime,
                           std::move(points), 1);
}

SyntheticWorkload parse_workload_json(std::string_view text) {
  using json = nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("invalid workload JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ParseError("workload must be a JSON object");

  SyntheticWorkload w;
  auto number = [&](const char *key, double &out) {
    if (!doc.contains(key))
      return;
    if (!doc[key].is_number())
      throw ParseError(std::string("workload: '") + key + "' must be a number");
    out = doc[key].get<double>();
  };
  number("alpha", w.alpha_target);
  number("total_ms", w.total_ms);
  number("overhead", w.overhead_fraction);
  if (doc.contains("reps")) {
    if (!doc["reps"].is_number_integer())
      throw ParseError("workload: 'reps' must be an integer");
    w.repetitions = doc["reps"].get<int>();
  }
  if (doc.contains("k_list")) {
    if (!doc["k_list"].is_array())
      throw ParseError("workload: 'k_list' must be an array");
    w.k_list.clear();
    for (const auto &k : doc["k_list"]) {
      if (!k.is_number_integer())
        throw ParseError("workload: 'k_list' entries must be integers");
      w.k_list.push_back(k.get<int>());
    }
  }
  return w;
}

} // namespace alphaeff
