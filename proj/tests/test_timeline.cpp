#include <doctest.h>

#include <cmath>
#include <random>

#include "alphaeff/errors.hpp"
#include "alphaeff/timeline.hpp"
#include "oracles.hpp"

using namespace alphaeff;
using doctest::Approx;

namespace {

constexpr double kExact = 1e-12;

Timeline classic() {
  return Timeline({{SegmentKind::Sequential, 1.5},
                   {SegmentKind::ParallelChunk, 2.5},
                   {SegmentKind::ParallelChunk, 2.5},
                   {SegmentKind::ParallelChunk, 2.5},
                   {SegmentKind::Sequential, 1.0}});
}

Timeline realistic() {
  return Timeline({{SegmentKind::Sequential, 1.5},
                   {SegmentKind::Control, 0.5},
                   {SegmentKind::ParallelChunk, 2.5},
                   {SegmentKind::ParallelChunk, 2.0},
                   {SegmentKind::ParallelChunk, 3.0},
                   {SegmentKind::Control, 1.0},
                   {SegmentKind::Sequential, 1.0}});
}

Timeline from(const oracle::RandomTimeline &r) {
  std::vector<Segment> segs{{SegmentKind::Sequential, r.seq_a},
                            {SegmentKind::Control, r.control}};
  for (double c : r.chunks)
    segs.push_back({SegmentKind::ParallelChunk, c});
  segs.push_back({SegmentKind::Sequential, r.seq_b});
  return Timeline(std::move(segs));
}

} // namespace

TEST_CASE("Timeline validation") {
  CHECK_THROWS_AS(Timeline({}), DomainError);
  CHECK_THROWS_AS(Timeline({{SegmentKind::Sequential, 0.0}}), DomainError);
  CHECK_THROWS_AS(Timeline({{SegmentKind::Sequential, -1.0},
                            {SegmentKind::ParallelChunk, 2.0}}),
                  DomainError);
  CHECK_NOTHROW(Timeline({{SegmentKind::Sequential, 0.0},
                          {SegmentKind::ParallelChunk, 2.0}}));
}

TEST_CASE("serial_time excludes control") {
  CHECK(serial_time(classic()) == 10.0);
  CHECK(serial_time(realistic()) == 10.0);
  CHECK(serial_time(Timeline({{SegmentKind::Sequential, 5.0}})) == 5.0);
}

TEST_CASE("simulate: classic case on 3 processors") {
  const auto r = simulate(classic(), 3, RoundRobin{});
  CHECK(std::abs(r.t_total - 5.0) < kExact);
  CHECK(std::abs(r.speedup - 2.0) < kExact);
  REQUIRE(r.alpha_eff);
  CHECK(std::abs(r.alpha_eff->value - 0.75) < kExact);
  CHECK(r.per_processor_wait == std::vector<double>{0, 0, 0});
}

TEST_CASE("simulate: realistic case on 3 processors") {
  const auto r = simulate(realistic(), 3, RoundRobin{});
  CHECK(std::abs(r.t_total - 7.0) < kExact);
  CHECK(std::abs(r.speedup - 10.0 / 7.0) < kExact);
  REQUIRE(r.alpha_eff);
  CHECK(std::abs(r.alpha_eff->value - 0.45) < kExact);
  CHECK(r.per_processor_busy == std::vector<double>{2.5, 2.0, 3.0});
  // The waiting slack of the faster workers.
  CHECK(r.per_processor_wait == std::vector<double>{0.5, 1.0, 0.0});
}

TEST_CASE("simulate: idle fourth processor") {
  const auto r = simulate(classic(), 4, RoundRobin{});
  CHECK(std::abs(r.t_total - 5.0) < kExact);
  CHECK(std::abs(r.speedup - 2.0) < kExact);
  CHECK(std::abs(r.alpha_eff->value - 2.0 / 3.0) < kExact);
  CHECK(r.per_processor_busy[3] == 0.0);
  CHECK(r.per_processor_wait[3] == 2.5);
}

TEST_CASE("simulate: one processor still pays control") {
  const auto r = simulate(realistic(), 1, RoundRobin{});
  CHECK(r.t_total == Approx(11.5));
  CHECK(r.speedup < 1.0);
  CHECK_FALSE(r.alpha_eff.has_value());
  CHECK(classify(r.speedup, 1) == ScalingRegime::Slowdown);

  const auto plain = simulate(classic(), 1, RoundRobin{});
  CHECK(plain.speedup == 1.0);
}

TEST_CASE("simulate: policies") {
  const Timeline t({{SegmentKind::ParallelChunk, 2},
                    {SegmentKind::ParallelChunk, 3},
                    {SegmentKind::ParallelChunk, 2},
                    {SegmentKind::ParallelChunk, 3},
                    {SegmentKind::ParallelChunk, 2}});

  SUBCASE("round robin") {
    const auto r = simulate(t, 2, RoundRobin{});
    CHECK(r.assignment == std::vector<std::size_t>{0, 1, 0, 1, 0});
    CHECK(r.t_total == 6.0);
  }
  SUBCASE("longest processing time first") {
    const auto r = simulate(t, 2, LongestProcessingTimeFirst{});
    // 3, 3 split; then 2, 2, 2 go to the least loaded processor in turn.
    CHECK(r.assignment == std::vector<std::size_t>{0, 0, 1, 1, 0});
    CHECK(r.t_total == 7.0);
  }
  SUBCASE("explicit") {
    const auto r = simulate(t, 2, ExplicitAssignment{{1, 0, 1, 0, 1}});
    CHECK(r.per_processor_busy == std::vector<double>{6.0, 6.0});
    CHECK_THROWS_AS(simulate(t, 2, ExplicitAssignment{{0, 1, 2, 0, 1}}),
                    DomainError);
    CHECK_THROWS_AS(simulate(t, 2, ExplicitAssignment{{0, 1}}), DomainError);
  }
  CHECK_THROWS_AS(simulate(t, 0, RoundRobin{}), DomainError);
}

TEST_CASE("simulate rejects a timeline with only control work") {
  CHECK_THROWS_AS(simulate(Timeline({{SegmentKind::Control, 1.0}}), 2),
                  DomainError);
}

TEST_CASE("surface examples") {
  CHECK(surface(0, 0, 3, 0.25).value == Approx(1.0).epsilon(kExact));
  CHECK(std::abs(surface(0.75, 0, 3, 0.25).value - 0.5) < kExact);
  // (3/2) (1 - 0.9125 / 1.35)
  CHECK(surface(0.6, 0.25, 3, 0.25).value ==
        Approx(1.5 * (1.0 - 0.9125 / 1.35)).epsilon(kExact));
  CHECK(surface(0.6, 0.25, 3, 0.25).value == Approx(0.486).epsilon(1e-3));
}

TEST_CASE("surface flags negative values") {
  const auto e = surface(0.0, 5.0, 3, 0.25);
  CHECK(e.value < 0.0);
  CHECK(e.regime == ScalingRegime::Slowdown);
}

TEST_CASE("surface domain") {
  CHECK_THROWS_AS(surface(0, 0, 1, 0.25), DomainError);
  CHECK_THROWS_AS(surface(0, 0, 3, 0.0), DomainError);
  CHECK_THROWS_AS(surface(-1, 0, 3, 0.25), DomainError);
  CHECK_THROWS_AS(surface(0, -1, 3, 0.25), DomainError);
}

TEST_CASE("sweep_surface") {
  SUBCASE("corners match pointwise calls") {
    const auto g = sweep_surface({0, 0.8}, {0, 0.6}, 2, 3, 0.25);
    REQUIRE(g.values.size() == 4);
    CHECK(g.at(0, 0) == surface(0, 0, 3, 0.25).value);
    CHECK(g.at(0, 1) == surface(0, 0.6, 3, 0.25).value);
    CHECK(g.at(1, 0) == surface(0.8, 0, 3, 0.25).value);
    CHECK(g.at(1, 1) == surface(0.8, 0.6, 3, 0.25).value);
  }
  SUBCASE("11 x 11 grid axes") {
    const auto g = sweep_surface({0, 0.8}, {0, 0.6}, 11, 3, 0.25);
    CHECK(g.seq_axis.size() == 11);
    CHECK(g.overhead_axis.size() == 11);
    CHECK(g.values.size() == 121);
    CHECK(g.seq_axis.front() == 0.0);
    CHECK(g.seq_axis.back() == 0.8);
    CHECK(g.overhead_axis[5] == Approx(0.3));
  }
  SUBCASE("every cell agrees with the simulator") {
    const auto g = sweep_surface({0, 0.8}, {0, 0.6}, 11, 3, 0.25);
    for (std::size_t i = 0; i < 11; ++i)
      for (std::size_t j = 0; j < 11; ++j) {
        const auto r = simulate(
            surface_timeline(g.seq_axis[i], g.overhead_axis[j], 3, 0.25), 3);
        CHECK(std::abs(r.alpha_eff->value - g.at(i, j)) <= kExact);
      }
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(sweep_surface({0, 0.8}, {0, 0.6}, 1, 3, 0.25), DomainError);
    CHECK_THROWS_AS(sweep_surface({0.8, 0.8}, {0, 0.6}, 3, 3, 0.25),
                    DomainError);
    CHECK_THROWS_AS(sweep_surface({0, 0.8}, {0.6, 0}, 3, 3, 0.25), DomainError);
  }
}

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

TEST_CASE("property: surface equals simulate on the equivalent timeline") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> seq(0.0, 5.0);
  std::uniform_real_distribution<double> ov(0.0, 2.0);
  std::uniform_real_distribution<double> chunk(0.01, 3.0);
  std::uniform_int_distribution<int> kd(2, 64);
  for (int i = 0; i < 2000; ++i) {
    const double s = seq(rng), o = ov(rng), c = chunk(rng);
    const int k = kd(rng);
    const auto r = simulate(surface_timeline(s, o, k, c), k);
    CHECK(std::abs(r.alpha_eff->value - surface(s, o, k, c).value) <= kExact);
  }
}

TEST_CASE("property: overhead-free equal chunks reproduce Amdahl's law") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> d(0.0, 4.0);
  std::uniform_real_distribution<double> chunk(0.01, 4.0);
  std::uniform_int_distribution<int> nd(1, 32);
  for (int i = 0; i < 1000; ++i) {
    const double s1 = d(rng), s2 = d(rng), c = chunk(rng);
    const int n = nd(rng);
    std::vector<Segment> segs{{SegmentKind::Sequential, s1}};
    std::vector<double> par(static_cast<std::size_t>(n), c);
    for (double p : par)
      segs.push_back({SegmentKind::ParallelChunk, p});
    segs.push_back({SegmentKind::Sequential, s2});
    const std::vector<double> seq{s1, s2};

    const auto r = simulate(Timeline(segs), n);
    const double expected = amdahl_speedup(AmdahlModel(alpha_classic(seq, par)), n);
    CHECK(std::abs(r.speedup - expected) <= kExact * expected);
  }
}

TEST_CASE("property: simulate makespan matches the fork-join sum") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const auto rt = oracle::random_timeline(rng, 8);
    const auto t = from(rt);
    for (int k = 1; k <= 5; ++k) {
      const auto r = simulate(t, k, LongestProcessingTimeFirst{});
      const double ml = oracle::max_load(rt.chunks, r.assignment,
                                         static_cast<std::size_t>(k));
      CHECK(r.t_total == Approx(oracle::fork_join_total(rt.seq_a + rt.seq_b,
                                                        rt.control, ml))
                             .epsilon(1e-12));
      for (std::size_t p = 0; p < r.per_processor_wait.size(); ++p)
        CHECK(r.per_processor_wait[p] >= 0.0);
    }
  }
}

TEST_CASE("property: LPT makespan non-increasing in k") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    const auto t = from(oracle::random_timeline(rng, 10));
    double prev = simulate(t, 1, LongestProcessingTimeFirst{}).t_total;
    for (int k = 2; k <= 12; ++k) {
      const double cur = simulate(t, k, LongestProcessingTimeFirst{}).t_total;
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("round robin is not monotone in k") {
  // Chunks 3,1,1,3: two processors pair them 3+1 / 1+3, three processors
  // put both 3s on processor 0.
  const Timeline t({{SegmentKind::ParallelChunk, 3},
                    {SegmentKind::ParallelChunk, 1},
                    {SegmentKind::ParallelChunk, 1},
                    {SegmentKind::ParallelChunk, 3}});
  CHECK(simulate(t, 2, RoundRobin{}).t_total == 4.0);
  CHECK(simulate(t, 3, RoundRobin{}).t_total == 6.0);
}

TEST_CASE("property: LPT stays within Graham's bound of the optimum") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 500; ++i) {
    const auto rt = oracle::random_timeline(rng, 8);
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto lpt = assign_chunks(rt.chunks, static_cast<int>(k),
                                     LongestProcessingTimeFirst{});
      const double got = oracle::max_load(rt.chunks, lpt, k);
      const double best = oracle::optimal_max_load(rt.chunks, k);
      CHECK(got >= best - 1e-12);
      CHECK(got <= (4.0 / 3.0 - 1.0 / (3.0 * k)) * best + 1e-12);
    }
  }
}

TEST_CASE("round robin can beat LPT") {
  // 2,3,2,3,2 on two processors: round robin finds the 6/6 split, LPT
  // pairs the two 3s first and ends at 7.
  const Timeline t({{SegmentKind::ParallelChunk, 2},
                    {SegmentKind::ParallelChunk, 3},
                    {SegmentKind::ParallelChunk, 2},
                    {SegmentKind::ParallelChunk, 3},
                    {SegmentKind::ParallelChunk, 2}});
  CHECK(simulate(t, 2, RoundRobin{}).t_total <
        simulate(t, 2, LongestProcessingTimeFirst{}).t_total);
}

TEST_CASE("property: k beyond the chunk count changes nothing") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 300; ++i) {
    const auto rt = oracle::random_timeline(rng, 6);
    const auto t = from(rt);
    const int n = static_cast<int>(rt.chunks.size());
    for (AssignmentPolicy p :
         {AssignmentPolicy{RoundRobin{}},
          AssignmentPolicy{LongestProcessingTimeFirst{}}}) {
      const double at_n = simulate(t, n, p).t_total;
      for (int k = n; k <= n + 5; ++k)
        CHECK(simulate(t, k, p).t_total == at_n);
    }
  }
}
