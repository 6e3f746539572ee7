#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fracmap/analysis.hpp"

using namespace fracmap;

namespace {

Orbit make_orbit(std::vector<double> samples) {
  Orbit o;
  o.samples = std::move(samples);
  return o;
}

Orbit cycle(std::vector<double> pattern, std::size_t length) {
  std::vector<double> s(length);
  for (std::size_t i = 0; i < length; ++i) s[i] = pattern[i % pattern.size()];
  return make_orbit(std::move(s));
}

GridPoint point(double g, std::vector<double> tail, bool diverged = false) {
  GridPoint p;
  p.grid_value = g;
  p.tail = std::move(tail);
  p.diverged = diverged;
  return p;
}

}  // namespace

TEST(DetectPeriod, ConstantOrbitIsFixedPointLike) {
  const auto v = detect_period(make_orbit(std::vector<double>(500, 0.25)), 400, 64, 1e-4);
  EXPECT_EQ(v.kind, VerdictKind::FixedPointLike);
  EXPECT_EQ(v.period, 1U);
  EXPECT_EQ(v.residual, 0.0);
  EXPECT_EQ(v.window_begin, 100U);
  EXPECT_EQ(v.window_end, 500U);
}

TEST(DetectPeriod, IntegerOrderTwoCycle) {
  const auto v = detect_period(solve_iolm(3.2, 0.1, 1000), 400, 64, 1e-4);
  EXPECT_EQ(v.kind, VerdictKind::NumericallyPeriodic);
  EXPECT_EQ(v.period, 2U);
}

TEST(DetectPeriod, FractionalOrbitIsOnlyNumericallyPeriodic) {
  const Orbit o = solve_orbit(OrbitProblem{FractionalOrder(0.25), MapSpec::logistic(1.8), 0.1, 3500});
  const auto v = detect_period(o, 500, 64, 1e-4);
  EXPECT_EQ(v.kind, VerdictKind::NumericallyPeriodic);
  EXPECT_EQ(v.period, 2U);
  EXPECT_GT(v.residual, 0.0);
  // Never exactly periodic.
  EXPECT_EQ(detect_period(o, 500, 64, 0.0).kind, VerdictKind::ChaoticLike);
}

TEST(DetectPeriod, ReportsMinimalPeriod) {
  const auto v = detect_period(cycle({0.1, 0.7, 0.3}, 600), 400, 64, 1e-9);
  EXPECT_EQ(v.kind, VerdictKind::NumericallyPeriodic);
  EXPECT_EQ(v.period, 3U);
  EXPECT_EQ(detect_period(cycle({0.1, 0.7, 0.3, 0.9, 0.2}, 600), 400, 64, 0.0).period, 5U);
}

TEST(DetectPeriod, PeriodBeyondSearchIsChaoticLike) {
  std::vector<double> pattern(70);
  for (std::size_t i = 0; i < pattern.size(); ++i) pattern[i] = static_cast<double>(i) / 70.0;
  const auto v = detect_period(cycle(pattern, 1000), 400, 64, 1e-4);
  EXPECT_EQ(v.kind, VerdictKind::ChaoticLike);
  EXPECT_EQ(v.period, 0U);
  EXPECT_GT(v.residual, 1e-4);
  EXPECT_EQ(detect_period(cycle(pattern, 1000), 400, 100, 1e-4).period, 70U);
}

TEST(DetectPeriod, RandomNoiseIsChaoticLike) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(800);
  for (auto& x : s) x = u(rng);
  EXPECT_EQ(detect_period(make_orbit(s), 400, 64, 1e-4).kind, VerdictKind::ChaoticLike);
}

TEST(DetectPeriod, DivergedOrbit) {
  const Orbit o = solve_orbit(OrbitProblem{FractionalOrder(0.2), MapSpec::logistic(2.4), 1.01, 2500});
  const auto v = detect_period(o, 400, 64, 1e-4);
  EXPECT_EQ(v.kind, VerdictKind::Diverged);
  EXPECT_TRUE(std::isinf(v.residual));
}

TEST(DetectPeriod, ArgumentChecks) {
  const Orbit o = make_orbit(std::vector<double>(100, 1.0));
  EXPECT_THROW((void)detect_period(o, 200, 64, 1e-4), std::invalid_argument);
  EXPECT_THROW((void)detect_period(o, 1, 64, 1e-4), std::invalid_argument);
  EXPECT_THROW((void)detect_period(o, 50, 0, 1e-4), std::invalid_argument);
  EXPECT_THROW((void)detect_period(o, 50, 8, -1.0), std::invalid_argument);
}

TEST(SegmentTransients, ConstantOrbitIsOneSegment) {
  const auto segs = segment_transients(make_orbit(std::vector<double>(2501, 0.5)), 400, 100, 64, 1e-4);
  ASSERT_EQ(segs.size(), 1U);
  EXPECT_EQ(segs[0].begin, 0U);
  EXPECT_EQ(segs[0].end, 2501U);
  EXPECT_TRUE(regime_changes(segs).empty());
}

TEST(SegmentTransients, IntegerOrderSettlesIntoTwoCycle) {
  const auto segs = segment_transients(solve_iolm(3.2, 0.1, 1000), 100, 50, 64, 1e-6);
  ASSERT_FALSE(segs.empty());
  EXPECT_EQ(segs.back().verdict.kind, VerdictKind::NumericallyPeriodic);
  EXPECT_EQ(segs.back().verdict.period, 2U);
  EXPECT_EQ(segs.back().end, 1001U);
  for (std::size_t i = 1; i < segs.size(); ++i) {
    EXPECT_EQ(segs[i].begin, segs[i - 1].end);
    EXPECT_FALSE(segs[i].verdict.same_regime(segs[i - 1].verdict));
  }
}

TEST(SegmentTransients, SwitchBetweenSyntheticRegimes) {
  std::vector<double> s;
  for (std::size_t i = 0; i < 1000; ++i) s.push_back(0.3);
  for (std::size_t i = 0; i < 1000; ++i) s.push_back(i % 2 ? 0.2 : 0.8);
  const auto segs = segment_transients(make_orbit(s), 200, 50, 16, 1e-9);
  ASSERT_EQ(segs.size(), 3U);
  EXPECT_EQ(segs[0].verdict.kind, VerdictKind::FixedPointLike);
  EXPECT_EQ(segs[1].verdict.kind, VerdictKind::ChaoticLike);  // windows straddling the switch
  EXPECT_EQ(segs[2].verdict.period, 2U);
  const auto changes = regime_changes(segs);
  EXPECT_GE(changes[0], 1000U);
  EXPECT_LE(changes[1], 1200U);
}

TEST(SegmentTransients, FinerStrideKeepsBoundaries) {
  const Orbit o = solve_iolm(3.2, 0.1, 1000);
  const auto coarse = regime_changes(segment_transients(o, 100, 50, 64, 1e-6));
  const auto fine = regime_changes(segment_transients(o, 100, 10, 64, 1e-6));
  ASSERT_EQ(coarse.size(), fine.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) EXPECT_LE(std::abs(double(coarse[i]) - double(fine[i])), 50.0);
}

TEST(SegmentTransients, DivergedOrbitEndsWithDivergedSegment) {
  Orbit o = make_orbit(std::vector<double>(300, 0.5));
  o.samples.push_back(1e11);
  o.diverged = true;
  o.divergence_index = 300;
  const auto segs = segment_transients(o, 100, 50, 8, 1e-4);
  ASSERT_EQ(segs.size(), 2U);
  EXPECT_EQ(segs[0].verdict.kind, VerdictKind::FixedPointLike);
  EXPECT_EQ(segs[0].end, 300U);
  EXPECT_EQ(segs[1].verdict.kind, VerdictKind::Diverged);
  EXPECT_EQ(segs[1].begin, 300U);
  EXPECT_EQ(segs[1].end, 301U);
}

TEST(Hausdorff, Basics) {
  const std::vector<double> a{0.0, 1.0}, b{0.0, 1.0, 3.0}, empty;
  EXPECT_EQ(hausdorff_distance(a, a), 0.0);
  EXPECT_EQ(hausdorff_distance(a, b), 2.0);
  EXPECT_EQ(hausdorff_distance(b, a), 2.0);
  EXPECT_EQ(hausdorff_distance(empty, empty), 0.0);
  EXPECT_TRUE(std::isinf(hausdorff_distance(a, empty)));
}

TEST(Hausdorff, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(1 + trial % 13), b(1 + trial % 7);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    double brute = 0.0;
    for (double x : a) {
      double m = INFINITY;
      for (double y : b) m = std::min(m, std::abs(x - y));
      brute = std::max(brute, m);
    }
    for (double y : b) {
      double m = INFINITY;
      for (double x : a) m = std::min(m, std::abs(x - y));
      brute = std::max(brute, m);
    }
    EXPECT_EQ(hausdorff_distance(a, b), brute);
    EXPECT_EQ(hausdorff_distance(b, a), brute);
  }
}

TEST(BsDistance, IdentitySymmetryAndMismatch) {
  BifurcativeSet a{0.1, {point(1.0, {0.1, 0.2}), point(2.0, {0.5}), point(3.0, {}, true), point(4.0, {}, true)}};
  BifurcativeSet b{0.5, {point(1.0, {0.1, 0.25}), point(2.0, {}, true), point(3.0, {}, true), point(4.0, {0.7})}};
  const auto self = bs_distance(a, a);
  for (double d : self.distance) EXPECT_EQ(d, 0.0);

  const auto ab = bs_distance(a, b);
  const auto ba = bs_distance(b, a);
  EXPECT_EQ(ab.distance, ba.distance);
  EXPECT_EQ(ab.mismatch, (std::vector<bool>{false, true, false, true}));
  EXPECT_NEAR(ab.distance[0], 0.05, 1e-15);
  EXPECT_TRUE(std::isinf(ab.distance[1]));
  EXPECT_EQ(ab.distance[2], 0.0);
  EXPECT_NEAR(ab.max_finite(), 0.05, 1e-15);
  EXPECT_NEAR(ab.mean_over(1.0, 3.0), 0.025, 1e-15);
  EXPECT_TRUE(std::isnan(ab.mean_over(5.0, 6.0)));
}

TEST(BsDistance, RejectsDifferentGrids) {
  BifurcativeSet a{0.1, {point(1.0, {0.1})}};
  BifurcativeSet b{0.5, {point(1.5, {0.1})}};
  BifurcativeSet c{0.5, {point(1.0, {0.1}), point(2.0, {0.1})}};
  EXPECT_THROW((void)bs_distance(a, b), std::invalid_argument);
  EXPECT_THROW((void)bs_distance(a, c), std::invalid_argument);
}

TEST(FirstBifurcation, SyntheticSet) {
  BifurcativeSet bs{0.1, {point(1.0, {}, true), point(1.1, {0.5, 0.6}), point(1.2, {0.5, 0.5001}),
                          point(1.3, {0.5, 0.5002}), point(1.4, {0.3, 0.7})}};
  EXPECT_EQ(first_bifurcation_point(bs, 0.005), 1.4);
  EXPECT_EQ(tail_diameter(bs.points[4]), 0.7 - 0.3);
  EXPECT_TRUE(std::isinf(tail_diameter(bs.points[0])));
  BifurcativeSet flat{0.1, {point(1.0, {0.5}), point(1.1, {0.5})}};
  EXPECT_FALSE(first_bifurcation_point(flat, 0.005).has_value());
}

TEST(FirstBifurcation, IntegerOrderPeriodDoubling) {
  // x + p x (1 - x) loses its fixed point at p = 2.
  SweepConfig c;
  c.axis = SweepAxis::ParamP;
  c.fixed_value = 1.0;
  for (int i = 0; i <= 100; ++i) c.grid.push_back(1.5 + 0.01 * i);
  c.initial_conditions = {0.5};
  c.n_max = 2500;
  const auto fb = first_bifurcation_point(run_sweep(c, 0).sets[0], kSimilarityTolerance);
  ASSERT_TRUE(fb.has_value());
  EXPECT_NEAR(*fb, 2.0, 0.06);
}
