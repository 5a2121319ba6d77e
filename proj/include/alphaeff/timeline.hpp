#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "alphaeff/metrics.hpp"

namespace alphaeff {

enum class SegmentKind { Sequential, ParallelChunk, Control };

struct Segment {
  SegmentKind kind = SegmentKind::Sequential;
  double duration = 0.0;
};

/// The single-processor view of one program: sequential parts, parallelizable
/// chunks, and the control overhead that only exists once the program is
/// parallelized. At least one segment must have a positive duration.
class Timeline {
public:
  explicit Timeline(std::vector<Segment> segments);

  const std::vector<Segment> &segments() const noexcept { return segments_; }

  /// Durations of the ParallelChunk segments in timeline order.
  std::vector<double> chunk_durations() const;
  double total(SegmentKind kind) const;

private:
  std::vector<Segment> segments_;
};

struct RoundRobin {};
struct LongestProcessingTimeFirst {};
/// Chunk i (in timeline order) runs on processor `processor_of[i]`.
struct ExplicitAssignment {
  std::vector<std::size_t> processor_of;
};

using AssignmentPolicy =
    std::variant<RoundRobin, LongestProcessingTimeFirst, ExplicitAssignment>;

struct ScheduleResult {
  double t_total = 0.0;
  double t_serial = 0.0;
  /// ParallelChunk load per processor.
  std::vector<double> per_processor_busy;
  /// max load - own load per processor.
  std::vector<double> per_processor_wait;
  double speedup = 1.0;
  /// Empty for k = 1.
  std::optional<EffectiveParallelization> alpha_eff;
  /// Processor of each chunk, in timeline order.
  std::vector<std::size_t> assignment;
};

/// Sum of Sequential and ParallelChunk durations. Control segments are not
/// part of the single-processor program.
double serial_time(const Timeline &timeline);

/// Chunk-to-processor map for `chunks` on k processors.
std::vector<std::size_t> assign_chunks(std::span<const double> chunks, int k,
                                       const AssignmentPolicy &policy);

/// Static fork-join execution on k processors.
///
/// Sequential and Control segments serialize: every processor is held while
/// they run. All ParallelChunks are statically mapped by `policy` and the
/// parallel phase lasts as long as the most loaded processor, so
///   t_total = sum(S) + sum(C) + max_p load(p).
/// For k = 1 the chunks run back to back and Control is still charged.
/// Throws DomainError for k < 1 or an explicit map that is the wrong size or
/// names a processor >= k.
ScheduleResult simulate(const Timeline &timeline, int k,
                        const AssignmentPolicy &policy = RoundRobin{});

/// alpha_eff of a program with `seq_time` sequential work, k equal chunks of
/// `chunk_time`, and control overhead of `overhead_fraction * chunk_time`:
///   (k / (k - 1)) (1 - (seq + chunk (1 + overhead)) / (seq + k chunk)).
/// Negative results (overhead exceeds the parallel gain) are returned with
/// the Slowdown regime.
EffectiveParallelization surface(double seq_time, double overhead_fraction,
                                 int k, double chunk_time);

/// The Timeline whose simulate() alpha_eff equals surface() for the same
/// arguments.
Timeline surface_timeline(double seq_time, double overhead_fraction, int k,
                          double chunk_time);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// `values` is row-major: row i is seq_axis[i], column j is overhead_axis[j].
struct SurfaceGrid {
  std::vector<double> seq_axis;
  std::vector<double> overhead_axis;
  std::vector<double> values;
  int k = 2;
  double chunk_time = 0.0;

  double at(std::size_t seq_index, std::size_t overhead_index) const {
    return values[seq_index * overhead_axis.size() + overhead_index];
  }
};

/// `steps` evenly spaced samples per axis, both ends included.
/// Throws DomainError for steps < 2 or a range with lo >= hi.
SurfaceGrid sweep_surface(Range seq_range, Range overhead_range, int steps,
                          int k, double chunk_time);

} // namespace alphaeff
