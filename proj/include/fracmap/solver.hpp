#pragma once

// Orbits of the Caputo-like discrete initial value problem
//
//     x(n) = x(0) + sum_{i=1}^{n} c[n-i] * f(x(i-1)),   n >= 1,
//
// with normalized kernel weights c (see kernel.hpp). The full memory is kept:
// every step is an inner product over the whole history, O(n_max^2) overall.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fracmap/kernel.hpp"
#include "fracmap/maps.hpp"
#include "fracmap/summation.hpp"

namespace fracmap {

inline constexpr double kDefaultDivergenceThreshold = 1e10;

/// Largest horizon accepted by the per-term log-gamma reference solver.
inline constexpr std::size_t kReferenceSolverMaxHorizon = 10'000;

struct OrbitProblem {
  FractionalOrder q;
  MapSpec map;
  double x0 = 0.0;
  std::size_t n_max = 2500;
  double divergence_threshold = kDefaultDivergenceThreshold;

  void validate() const {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (!(divergence_threshold > 0.0)) throw std::invalid_argument("divergence threshold must be > 0");
    if (!std::isfinite(x0)) throw std::invalid_argument("initial condition must be finite");
  }
};

/// A trajectory x(0), x(1), ... . A diverged orbit ends at the first sample whose
/// magnitude exceeds the threshold (or is not finite); that sample is kept.
struct Orbit {
  std::vector<double> samples;
  bool diverged = false;
  std::optional<std::size_t> divergence_index;

  [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }

  /// Last `count` samples (fewer if the orbit is shorter).
  [[nodiscard]] std::span<const double> tail(std::size_t count) const noexcept {
    const std::size_t n = count < samples.size() ? count : samples.size();
    return std::span<const double>(samples).last(n);
  }
};

namespace detail {

inline bool escapes(double x, double threshold) noexcept {
  return !std::isfinite(x) || std::abs(x) > threshold;
}

/// Shared driver: `step(n, history)` returns the memory sum for sample n given
/// f(x(0)) .. f(x(n-1)).
template <class MemorySum>
Orbit iterate_memory(const OrbitProblem& problem, MemorySum&& memory_sum) {
  Orbit orbit;
  orbit.samples.reserve(problem.n_max + 1);
  orbit.samples.push_back(problem.x0);
  if (escapes(problem.x0, problem.divergence_threshold)) {
    orbit.diverged = true;
    orbit.divergence_index = 0;
    return orbit;
  }
  std::vector<double> forcing;
  forcing.reserve(problem.n_max);
  for (std::size_t n = 1; n <= problem.n_max; ++n) {
    forcing.push_back(problem.map(orbit.samples.back()));
    const double xn = problem.x0 + memory_sum(n, std::span<const double>(forcing));
    orbit.samples.push_back(xn);
    if (escapes(xn, problem.divergence_threshold)) {
      orbit.diverged = true;
      orbit.divergence_index = n;
      break;
    }
  }
  return orbit;
}

}  // namespace detail

/// Production solver over precomputed weights. Accumulates in ascending lag order;
/// horizons above kCompensationThreshold use compensated summation.
[[nodiscard]] inline Orbit solve_orbit(const OrbitProblem& problem, const KernelWeights& weights) {
  problem.validate();
  if (weights.order() != problem.q) {
    std::ostringstream msg;
    msg << "kernel weights built for q=" << weights.order().value() << " but problem has q="
        << problem.q.value();
    throw std::invalid_argument(msg.str());
  }
  if (weights.size() < problem.n_max) {
    std::ostringstream msg;
    msg << "kernel weights have length " << weights.size() << " but horizon n_max=" << problem.n_max;
    throw std::invalid_argument(msg.str());
  }
  const bool compensated = problem.n_max > kCompensationThreshold;
  const std::span<const double> c = weights.values();
  return detail::iterate_memory(problem, [&](std::size_t, std::span<const double> history) {
    return convolve_ascending(c, history, compensated);
  });
}

/// Convenience overload building recurrence weights on the fly.
[[nodiscard]] inline Orbit solve_orbit(const OrbitProblem& problem) {
  problem.validate();
  return solve_orbit(problem, weights_recurrence(problem.q, problem.n_max));
}

/// Independent oracle: re-evaluates every kernel weight as
/// exp(lnGamma(k + q) - lnGamma(k + 1)) / Gamma(q) inside the double loop. Same
/// summation order as solve_orbit. Desk-scale only (n_max <= 10^4).
[[nodiscard]] inline Orbit solve_orbit_reference(const OrbitProblem& problem) {
  problem.validate();
  if (problem.n_max > kReferenceSolverMaxHorizon) {
    std::ostringstream msg;
    msg << "reference solver is limited to n_max <= " << kReferenceSolverMaxHorizon << ", got "
        << problem.n_max;
    throw std::invalid_argument(msg.str());
  }
  const double q = problem.q.value();
  const double gamma_q = std::tgamma(q);
  return detail::iterate_memory(problem, [&](std::size_t n, std::span<const double> history) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto kd = static_cast<double>(k);
      const double ratio = std::exp(std::lgamma(kd + q) - std::lgamma(kd + 1.0)) / gamma_q;
      sum += ratio * history[n - 1 - k];
    }
    return sum;
  });
}

/// Classic integer-order logistic map x(n+1) = p x(n) (1 - x(n)).
[[nodiscard]] inline Orbit solve_iolm(double p, double x0, std::size_t n_max,
                                      double divergence_threshold = kDefaultDivergenceThreshold) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!std::isfinite(x0)) throw std::invalid_argument("initial condition must be finite");
  Orbit orbit;
  orbit.samples.reserve(n_max + 1);
  orbit.samples.push_back(x0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double x = orbit.samples.back();
    const double next = p * x * (1.0 - x);
    orbit.samples.push_back(next);
    if (detail::escapes(next, divergence_threshold)) {
      orbit.diverged = true;
      orbit.divergence_index = n;
      break;
    }
  }
  return orbit;
}

}  // namespace fracmap
