#pragma once

// Bifurcation sweeps. One orbit is run per (grid value, initial condition) and
// the tail of each orbit is kept. The tails generated from one initial
// condition across the whole grid form a BifurcativeSet; a BifurcationDiagram
// collects one set per initial condition over a shared grid.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fracmap/kernel.hpp"
#include "fracmap/maps.hpp"
#include "fracmap/solver.hpp"

namespace fracmap {

enum class SweepAxis { ParamP, OrderQ };

struct SweepConfig {
  SweepAxis axis = SweepAxis::ParamP;
  std::vector<double> grid;
  /// q when sweeping the map parameter, the map parameter when sweeping q.
  double fixed_value = 1.0;
  std::vector<double> initial_conditions;
  std::size_t n_max = 2500;
  std::size_t tail_length = 200;
  /// Family template; its parameter is replaced per task.
  MapSpec map = MapSpec::logistic(0.0);
  double divergence_threshold = kDefaultDivergenceThreshold;

  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("sweep config: " + what); };
    if (grid.empty()) fail("grid must be non-empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) fail("grid must be strictly increasing");
    }
    for (double g : grid) {
      if (!std::isfinite(g)) fail("grid values must be finite");
      if (axis == SweepAxis::OrderQ && !(g > 0.0 && g <= 1.0)) {
        std::ostringstream msg;
        msg << "q-axis grid value " << g << " outside (0, 1]";
        fail(msg.str());
      }
    }
    if (axis == SweepAxis::ParamP) (void)FractionalOrder(fixed_value);
    if (initial_conditions.empty()) fail("at least one initial condition is required");
    for (std::size_t i = 0; i < initial_conditions.size(); ++i) {
      if (!std::isfinite(initial_conditions[i])) fail("initial conditions must be finite");
      for (std::size_t j = 0; j < i; ++j) {
        if (initial_conditions[i] == initial_conditions[j]) fail("initial conditions must be distinct");
      }
    }
    if (n_max < 1) fail("n_max must be >= 1");
    if (tail_length < 1 || tail_length >= n_max) fail("tail_length must satisfy 1 <= tail_length < n_max");
    if (!(divergence_threshold > 0.0)) fail("divergence threshold must be > 0");
  }

  [[nodiscard]] FractionalOrder order_at(std::size_t grid_index) const {
    return FractionalOrder(axis == SweepAxis::OrderQ ? grid[grid_index] : fixed_value);
  }

  [[nodiscard]] MapSpec map_at(std::size_t grid_index) const {
    return map.with_param(axis == SweepAxis::ParamP ? grid[grid_index] : fixed_value);
  }

  [[nodiscard]] OrbitProblem problem_at(std::size_t grid_index, double x0) const {
    return OrbitProblem{order_at(grid_index), map_at(grid_index), x0, n_max, divergence_threshold};
  }
};

struct GridPoint {
  double grid_value = 0.0;
  bool diverged = false;
  std::optional<std::size_t> divergence_index;
  std::vector<double> tail;
};

struct BifurcativeSet {
  double x0 = 0.0;
  std::vector<GridPoint> points;

  [[nodiscard]] std::size_t diverged_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const GridPoint& p) { return p.diverged; }));
  }
};

struct BifurcationDiagram {
  SweepConfig config;
  std::vector<BifurcativeSet> sets;

  [[nodiscard]] const BifurcativeSet& at(double x0) const {
    for (const auto& s : sets) {
      if (s.x0 == x0) return s;
    }
    std::ostringstream msg;
    msg << "no bifurcative set for x0=" << x0;
    throw std::out_of_range(msg.str());
  }

  [[nodiscard]] bool all_diverged() const noexcept {
    return std::all_of(sets.begin(), sets.end(),
                       [](const BifurcativeSet& s) { return s.diverged_count() == s.points.size(); });
  }
};

/// Kernel tables keyed by q: a single table for a parameter sweep, one per grid
/// value for an order sweep.
[[nodiscard]] inline std::map<double, KernelWeights> weights_cache(const SweepConfig& config) {
  config.validate();
  std::map<double, KernelWeights> cache;
  if (config.axis == SweepAxis::ParamP) {
    cache.emplace(config.fixed_value, weights_recurrence(FractionalOrder(config.fixed_value), config.n_max));
  } else {
    for (double q : config.grid) {
      cache.emplace(q, weights_recurrence(FractionalOrder(q), config.n_max));
    }
  }
  return cache;
}

/// Resolves a requested thread count; 0 means one per hardware thread.
[[nodiscard]] inline unsigned resolve_threads(unsigned requested) noexcept {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1U : hw;
}

/// Runs every (grid value, x0) orbit. Tasks write into preallocated slots, so the
/// result does not depend on the thread count or completion order.
[[nodiscard]] inline BifurcationDiagram run_sweep(const SweepConfig& config, unsigned threads = 0) {
  config.validate();
  const auto cache = weights_cache(config);

  const std::size_t n_grid = config.grid.size();
  const std::size_t n_ic = config.initial_conditions.size();
  BifurcationDiagram diagram{config, {}};
  diagram.sets.resize(n_ic);
  for (std::size_t j = 0; j < n_ic; ++j) {
    diagram.sets[j].x0 = config.initial_conditions[j];
    diagram.sets[j].points.resize(n_grid);
  }

  const std::size_t n_tasks = n_grid * n_ic;
  auto run_task = [&](std::size_t task) {
    const std::size_t gi = task / n_ic;
    const std::size_t ji = task % n_ic;
    const OrbitProblem problem = config.problem_at(gi, config.initial_conditions[ji]);
    const Orbit orbit = solve_orbit(problem, cache.at(problem.q.value()));

    GridPoint& slot = diagram.sets[ji].points[gi];
    slot.grid_value = config.grid[gi];
    slot.diverged = orbit.diverged;
    slot.divergence_index = orbit.divergence_index;
    if (!orbit.diverged) {
      const auto tail = orbit.tail(config.tail_length);
      slot.tail.assign(tail.begin(), tail.end());
    }
  };

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    try {
      for (std::size_t task = next.fetch_add(1); task < n_tasks; task = next.fetch_add(1)) run_task(task);
    } catch (...) {
      const std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(n_tasks);
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n_tasks, 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return diagram;
}

}  // namespace fracmap
