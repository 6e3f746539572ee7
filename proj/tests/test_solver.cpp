#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracmap/solver.hpp"
#include "oracles.hpp"

using namespace fracmap;

namespace {

OrbitProblem logistic(double q, double p, double x0, std::size_t n_max) {
  return OrbitProblem{FractionalOrder(q), MapSpec::logistic(p), x0, n_max};
}

double max_abs_diff(const Orbit& a, const Orbit& b) {
  EXPECT_EQ(a.size(), b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a.samples[i] - b.samples[i]));
  return m;
}

}  // namespace

TEST(SolveOrbit, FirstStepIsOrderIndependent) {
  for (double q : {0.1, 0.5, 0.9, 1.0}) {
    const Orbit o = solve_orbit(logistic(q, 2.0, 0.3, 1));
    ASSERT_EQ(o.size(), 2U);
    EXPECT_EQ(o.samples[0], 0.3);
    EXPECT_DOUBLE_EQ(o.samples[1], 0.72);
    EXPECT_EQ(o.samples[1], 0.3 + 2.0 * 0.3 * (1.0 - 0.3));
  }
}

TEST(SolveOrbit, RandomFirstStepProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> qd(1e-3, 1.0), pd(-3.0, 3.0), xd(-1.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const auto problem = logistic(qd(rng), pd(rng), xd(rng), 5);
    const Orbit o = solve_orbit(problem);
    EXPECT_EQ(o.samples[1], problem.x0 + problem.map(problem.x0));
  }
}

TEST(SolveOrbit, ZeroIsInvariant) {
  for (double q : {0.2, 0.7, 1.0}) {
    const Orbit o = solve_orbit(logistic(q, 2.4, 0.0, 300));
    EXPECT_FALSE(o.diverged);
    EXPECT_EQ(o.size(), 301U);
    for (double x : o.samples) EXPECT_EQ(x, 0.0);
  }
}

TEST(SolveOrbit, IntegerOrderCollapsesToDifferenceForm) {
  const Orbit o = solve_orbit(logistic(1.0, 1.0, 0.5, 3));
  EXPECT_EQ(o.samples[1], 0.75);
  EXPECT_EQ(o.samples[2], 0.9375);

  for (double p : {1.5, 2.0, 2.4}) {
    for (double x0 : {0.1, 0.5}) {
      const Orbit o2 = solve_orbit(logistic(1.0, p, x0, 1000));
      const auto ref = oracle::difference_form_logistic(p, x0, 1000);
      ASSERT_EQ(o2.size(), ref.size());
      for (std::size_t n = 0; n < ref.size(); ++n) ASSERT_NEAR(o2.samples[n], ref[n], 1e-8) << "p=" << p << " n=" << n;
    }
  }
}

TEST(SolveOrbit, DivergesAndTruncates) {
  const Orbit o = solve_orbit(logistic(0.2, 2.4, 1.01, 2500));
  ASSERT_TRUE(o.diverged);
  ASSERT_TRUE(o.divergence_index.has_value());
  EXPECT_EQ(*o.divergence_index + 1, o.size());
  EXPECT_GT(std::abs(o.samples.back()), kDefaultDivergenceThreshold);
  for (std::size_t i = 0; i + 1 < o.size(); ++i) EXPECT_LE(std::abs(o.samples[i]), kDefaultDivergenceThreshold);
}

TEST(SolveOrbit, CustomThreshold) {
  auto problem = logistic(0.5, 2.4, -0.5, 100);
  problem.divergence_threshold = 1.5;
  const Orbit o = solve_orbit(problem);
  ASSERT_TRUE(o.diverged);
  EXPECT_EQ(o.divergence_index, 1U);
  EXPECT_EQ(o.samples.back(), -2.3);
}

TEST(SolveOrbit, DeterministicBitwise) {
  const auto problem = logistic(0.3, 2.4, 0.5, 2000);
  const Orbit a = solve_orbit(problem);
  const Orbit b = solve_orbit(problem);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(SolveOrbit, ContractViolations) {
  const auto problem = logistic(0.5, 2.0, 0.1, 100);
  EXPECT_THROW((void)solve_orbit(problem, weights_recurrence(FractionalOrder(0.4), 100)), std::invalid_argument);
  EXPECT_THROW((void)solve_orbit(problem, weights_recurrence(FractionalOrder(0.5), 99)), std::invalid_argument);
  EXPECT_NO_THROW((void)solve_orbit(problem, weights_recurrence(FractionalOrder(0.5), 200)));
  EXPECT_THROW((void)solve_orbit(logistic(0.5, 2.0, 0.1, 0)), std::invalid_argument);
  EXPECT_THROW((void)solve_orbit(logistic(0.5, 2.0, std::nan(""), 10)), std::invalid_argument);
  auto bad = problem;
  bad.divergence_threshold = 0.0;
  EXPECT_THROW((void)solve_orbit(bad), std::invalid_argument);
}

TEST(SolveOrbit, CompensatedHorizonStaysCloseToPlainPrefix) {
  // Past 10^4 steps the accumulation switches to compensated summation; on a
  // contracting orbit both policies agree closely over the common prefix.
  const Orbit plain = solve_orbit(logistic(0.6, 1.2, 0.3, 2000));
  const Orbit comp = solve_orbit(logistic(0.6, 1.2, 0.3, 10'500));
  for (std::size_t n = 0; n < plain.size(); ++n) ASSERT_NEAR(plain.samples[n], comp.samples[n], 1e-13);
}

TEST(SolveOrbitReference, AgreesOnNonChaoticOrbits) {
  EXPECT_LT(max_abs_diff(solve_orbit(logistic(0.5, 1.8, 0.1, 500)), solve_orbit_reference(logistic(0.5, 1.8, 0.1, 500))),
            1e-8);
  for (double q : {0.3, 0.6, 0.9}) {
    for (double p : {1.2, 1.3, 1.8}) {
      const auto problem = logistic(q, p, 0.3, 1000);
      EXPECT_LT(max_abs_diff(solve_orbit(problem), solve_orbit_reference(problem)), 1e-8) << q << " " << p;
    }
  }
}

TEST(SolveOrbitReference, BitwiseAtIntegerOrder) {
  const auto problem = logistic(1.0, 3.2, 0.1, 100);
  const Orbit a = solve_orbit(problem);
  const Orbit b = solve_orbit_reference(problem);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_EQ(a.diverged, b.diverged);
}

TEST(SolveOrbitReference, ChaoticTransientAmplifiesRounding) {
  // Both solvers are correct here; the orbit is chaotic, so rounding differences grow.
  const auto problem = logistic(0.3, 1.5, 0.1, 1000);
  EXPECT_GT(max_abs_diff(solve_orbit(problem), solve_orbit_reference(problem)), 1e-8);
  const auto shorter = logistic(0.3, 1.5, 0.1, 200);
  EXPECT_LT(max_abs_diff(solve_orbit(shorter), solve_orbit_reference(shorter)), 1e-10);
}

TEST(SolveOrbitReference, HorizonLimit) {
  EXPECT_THROW((void)solve_orbit_reference(logistic(0.5, 1.0, 0.1, 10'001)), std::invalid_argument);
}

TEST(SolveIolm, Examples) {
  const Orbit chaos_edge = solve_iolm(4.0, 0.5, 10);
  EXPECT_EQ(chaos_edge.samples[1], 1.0);
  for (std::size_t n = 2; n < chaos_edge.size(); ++n) EXPECT_EQ(chaos_edge.samples[n], 0.0);

  const Orbit fixed = solve_iolm(2.0, 0.5, 50);
  for (double x : fixed.samples) EXPECT_EQ(x, 0.5);

  const Orbit cycle = solve_iolm(3.2, 0.1, 1000);
  const auto tail = cycle.tail(4);
  EXPECT_NEAR(tail[0], tail[2], 1e-12);
  EXPECT_NEAR(tail[1], tail[3], 1e-12);
  EXPECT_GT(std::abs(tail[0] - tail[1]), 0.1);
}

TEST(SolveOrbit, PuuOrbitIsOdd) {
  for (double x0 : {0.2, 0.5, 0.1, 0.4}) {
    const auto plus = solve_orbit(OrbitProblem{FractionalOrder(0.6), MapSpec::puu(1.27), x0, 1000});
    const auto minus = solve_orbit(OrbitProblem{FractionalOrder(0.6), MapSpec::puu(1.27), -x0, 1000});
    ASSERT_EQ(plus.size(), minus.size());
    for (std::size_t n = 0; n < plus.size(); ++n) ASSERT_EQ(plus.samples[n], -minus.samples[n]);
  }
}
