#include "alphaeff/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "alphaeff/errors.hpp"

namespace alphaeff {

Timeline::Timeline(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  bool any_positive = false;
  for (const auto &s : segments_) {
    if (!std::isfinite(s.duration) || s.duration < 0.0)
      throw DomainError("Timeline: segment durations must be finite and >= 0");
    any_positive = any_positive || s.duration > 0.0;
  }
  if (!any_positive)
    throw DomainError("Timeline: needs at least one segment with a positive "
                      "duration");
}

std::vector<double> Timeline::chunk_durations() const {
  std::vector<double> out;
  for (const auto &s : segments_)
    if (s.kind == SegmentKind::ParallelChunk)
      out.push_back(s.duration);
  return out;
}

double Timeline::total(SegmentKind kind) const {
  double sum = 0.0;
  for (const auto &s : segments_)
    if (s.kind == kind)
      sum += s.duration;
  return sum;
}

double serial_time(const Timeline &timeline) {
  return timeline.total(SegmentKind::Sequential) +
         timeline.total(SegmentKind::ParallelChunk);
}

namespace {

struct PolicyAssigner {
  std::span<const double> chunks;
  std::size_t k;

  std::vector<std::size_t> operator()(const RoundRobin &) const {
    std::vector<std::size_t> out(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i)
      out[i] = i % k;
    return out;
  }

  // Heaviest chunk first onto the least loaded processor. Ties go to the
  // earlier chunk and the lower processor index, so the map is deterministic.
  std::vector<std::size_t> operator()(const LongestProcessingTimeFirst &) const {
    std::vector<std::size_t> order(chunks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return chunks[a] > chunks[b];
                     });
    std::vector<double> load(k, 0.0);
    std::vector<std::size_t> out(chunks.size());
    for (std::size_t c : order) {
      const auto p = static_cast<std::size_t>(
          std::min_element(load.begin(), load.end()) - load.begin());
      out[c] = p;
      load[p] += chunks[c];
    }
    return out;
  }

  std::vector<std::size_t> operator()(const ExplicitAssignment &e) const {
    if (e.processor_of.size() != chunks.size())
      throw DomainError("explicit assignment maps " +
                        std::to_string(e.processor_of.size()) +
                        " chunks but the timeline has " +
                        std::to_string(chunks.size()));
    for (std::size_t i = 0; i < e.processor_of.size(); ++i)
      if (e.processor_of[i] >= k)
        throw DomainError("explicit assignment puts chunk " +
                          std::to_string(i) + " on processor " +
                          std::to_string(e.processor_of[i]) +
                          " but only " + std::to_string(k) + " exist");
    return e.processor_of;
  }
};

} // namespace

std::vector<std::size_t> assign_chunks(std::span<const double> chunks, int k,
                                       const AssignmentPolicy &policy) {
  if (k < 1)
    throw DomainError("assign_chunks: processor count must be >= 1");
  return std::visit(PolicyAssigner{chunks, static_cast<std::size_t>(k)},
                    policy);
}

ScheduleResult simulate(const Timeline &timeline, int k,
                        const AssignmentPolicy &policy) {
  if (k < 1)
    throw DomainError("simulate: processor count must be >= 1, got " +
                      std::to_string(k));

  const auto chunks = timeline.chunk_durations();
  ScheduleResult r;
  r.assignment = assign_chunks(chunks, k, policy);

  r.per_processor_busy.assign(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < chunks.size(); ++i)
    r.per_processor_busy[r.assignment[i]] += chunks[i];

  const double max_load = *std::max_element(r.per_processor_busy.begin(),
                                            r.per_processor_busy.end());
  r.per_processor_wait.reserve(r.per_processor_busy.size());
  for (double busy : r.per_processor_busy)
    r.per_processor_wait.push_back(max_load - busy);

  r.t_serial = serial_time(timeline);
  if (r.t_serial <= 0.0)
    throw DomainError("simulate: timeline has no sequential or parallel work");
  r.t_total = timeline.total(SegmentKind::Sequential) +
              timeline.total(SegmentKind::Control) + max_load;
  r.speedup = r.t_serial / r.t_total;
  if (k >= 2)
    r.alpha_eff = alpha_eff(r.speedup, k);
  return r;
}

EffectiveParallelization surface(double seq_time, double overhead_fraction,
                                 int k, double chunk_time) {
  if (k < 2)
    throw DomainError("surface: processor count must be >= 2");
  if (!(chunk_time > 0.0) || !std::isfinite(chunk_time))
    throw DomainError("surface: chunk time must be finite and > 0");
  if (!(seq_time >= 0.0) || !std::isfinite(seq_time))
    throw DomainError("surface: sequential time must be finite and >= 0");
  if (!(overhead_fraction >= 0.0) || !std::isfinite(overhead_fraction))
    throw DomainError("surface: overhead fraction must be finite and >= 0");

  const double kd = k;
  const double parallel_time = seq_time + chunk_time * (1.0 + overhead_fraction);
  const double serial = seq_time + kd * chunk_time;
  const double value = (kd / (kd - 1.0)) * (1.0 - parallel_time / serial);
  return {value, classify(serial / parallel_time, k)};
}

Timeline surface_timeline(double seq_time, double overhead_fraction, int k,
                          double chunk_time) {
  std::vector<Segment> segs;
  segs.push_back({SegmentKind::Sequential, seq_time});
  for (int i = 0; i < k; ++i)
    segs.push_back({SegmentKind::ParallelChunk, chunk_time});
  segs.push_back({SegmentKind::Control, overhead_fraction * chunk_time});
  return Timeline(std::move(segs));
}

namespace {

std::vector<double> linspace(Range r, int steps) {
  std::vector<double> out(static_cast<std::size_t>(steps));
  const double step = (r.hi - r.lo) / (steps - 1);
  for (int i = 0; i < steps; ++i)
    out[static_cast<std::size_t>(i)] = r.lo + step * i;
  out.back() = r.hi;
  return out;
}

void require_range(Range r, const char *name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi))
    throw DomainError(std::string("sweep_surface: degenerate ") + name +
                      " range");
}

} // namespace

SurfaceGrid sweep_surface(Range seq_range, Range overhead_range, int steps,
                          int k, double chunk_time) {
  if (steps < 2)
    throw DomainError("sweep_surface: steps must be >= 2");
  require_range(seq_range, "sequential");
  require_range(overhead_range, "overhead");

  SurfaceGrid g;
  g.k = k;
  g.chunk_time = chunk_time;
  g.seq_axis = linspace(seq_range, steps);
  g.overhead_axis = linspace(overhead_range, steps);
  g.values.reserve(g.seq_axis.size() * g.overhead_axis.size());
  for (double s : g.seq_axis)
    for (double o : g.overhead_axis)
      g.values.push_back(surface(s, o, k, chunk_time).value);
  return g;
}

} // namespace alphaeff
