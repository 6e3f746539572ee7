#pragma once

// Post-processing of orbits and bifurcative sets.
//
// Fractional-order orbits are never exactly periodic, so periodicity is judged
// numerically: a window of samples is periodic with lag m when every sample in
// the window matches the one m steps earlier (also inside the window) to within
// a tolerance. Such orbits are reported as numerically periodic (NPO).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "fracmap/solver.hpp"
#include "fracmap/sweep.hpp"

namespace fracmap {

struct PeriodDefaults {
  static constexpr std::size_t window = 400;
  static constexpr std::size_t stride = 100;
  static constexpr std::size_t max_period = 64;
  static constexpr double tol = 1e-4;
};

/// Tail sets closer than this (Hausdorff) are considered similar.
inline constexpr double kSimilarityTolerance = 0.005;

enum class VerdictKind { FixedPointLike, NumericallyPeriodic, ChaoticLike, Diverged };

[[nodiscard]] constexpr std::string_view to_string(VerdictKind kind) noexcept {
  switch (kind) {
    case VerdictKind::FixedPointLike: return "fixed_point_like";
    case VerdictKind::NumericallyPeriodic: return "npo";
    case VerdictKind::ChaoticLike: return "chaotic_like";
    case VerdictKind::Diverged: return "diverged";
  }
  return "unknown";
}

struct PeriodVerdict {
  VerdictKind kind = VerdictKind::ChaoticLike;
  /// 1 for FixedPointLike, the detected lag for NPOs, 0 otherwise.
  std::size_t period = 0;
  /// Max mismatch at the detected lag; for ChaoticLike the smallest mismatch seen.
  double residual = 0.0;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;

  /// Same regime: equal kind and period (residual and window ignored).
  [[nodiscard]] bool same_regime(const PeriodVerdict& other) const noexcept {
    return kind == other.kind && period == other.period;
  }
};

/// Classifies samples[end - window, end). Lags are tested from 1 up to
/// min(max_period, window / 2), comparing pairs that both lie in the window.
[[nodiscard]] inline PeriodVerdict classify_window(std::span<const double> samples, std::size_t end,
                                                   std::size_t window, std::size_t max_period, double tol) {
  if (window < 2) throw std::invalid_argument("period window must hold at least 2 samples");
  if (end > samples.size() || window > end) {
    std::ostringstream msg;
    msg << "window of " << window << " samples ending at " << end << " exceeds the " << samples.size()
        << " available";
    throw std::invalid_argument(msg.str());
  }
  if (!(tol >= 0.0)) throw std::invalid_argument("periodicity tolerance must be >= 0");
  if (max_period < 1) throw std::invalid_argument("max_period must be >= 1");

  const std::size_t begin = end - window;
  const std::size_t lags = std::min(max_period, window / 2);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m <= lags; ++m) {
    double residual = 0.0;
    for (std::size_t n = begin + m; n < end; ++n) {
      residual = std::max(residual, std::abs(samples[n] - samples[n - m]));
      if (residual > tol) break;
    }
    if (residual <= tol) {
      const auto kind = m == 1 ? VerdictKind::FixedPointLike : VerdictKind::NumericallyPeriodic;
      return {kind, m, residual, begin, end};
    }
    best = std::min(best, residual);
  }
  return {VerdictKind::ChaoticLike, 0, best, begin, end};
}

/// Verdict on the last `window` samples of an orbit.
[[nodiscard]] inline PeriodVerdict detect_period(const Orbit& orbit, std::size_t window, std::size_t max_period,
                                                 double tol) {
  if (orbit.diverged) {
    const std::size_t at = orbit.divergence_index.value_or(orbit.size());
    return {VerdictKind::Diverged, 0, std::numeric_limits<double>::infinity(), at, at + 1};
  }
  return classify_window(orbit.samples, orbit.size(), window, max_period, tol);
}

struct TransientSegment {
  std::size_t begin = 0;  ///< first sample index covered
  std::size_t end = 0;    ///< one past the last sample index covered
  PeriodVerdict verdict;
};

/// Sliding-window regime segmentation. Windows end at window, window + stride, ...
/// (plus one final window ending at the last sample when the grid does not reach
/// it). Each window's verdict covers the samples since the previous window end;
/// consecutive blocks with the same regime are merged. Boundaries are therefore
/// aligned to the window/stride grid. A diverged orbit is segmented up to its
/// divergence sample, followed by a Diverged segment.
[[nodiscard]] inline std::vector<TransientSegment> segment_transients(const Orbit& orbit, std::size_t window,
                                                                      std::size_t stride, std::size_t max_period,
                                                                      double tol) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const std::size_t analyzed = orbit.diverged ? orbit.divergence_index.value_or(orbit.size()) : orbit.size();
  const std::span<const double> samples = std::span<const double>(orbit.samples).first(analyzed);
  if (window > analyzed) {
    std::ostringstream msg;
    msg << "window of " << window << " samples exceeds the " << analyzed << " analyzable samples";
    throw std::invalid_argument(msg.str());
  }

  std::vector<TransientSegment> segments;
  auto push = [&](std::size_t block_begin, std::size_t block_end, const PeriodVerdict& verdict) {
    if (!segments.empty() && segments.back().verdict.same_regime(verdict)) {
      segments.back().end = block_end;
      segments.back().verdict.residual = std::max(segments.back().verdict.residual, verdict.residual);
      segments.back().verdict.window_end = verdict.window_end;
    } else {
      segments.push_back({block_begin, block_end, verdict});
    }
  };

  std::size_t previous_end = 0;
  for (std::size_t end = window; end <= analyzed; end += stride) {
    push(previous_end, end, classify_window(samples, end, window, max_period, tol));
    previous_end = end;
  }
  if (previous_end < analyzed) {
    push(previous_end, analyzed, classify_window(samples, analyzed, window, max_period, tol));
  }
  if (orbit.diverged) {
    push(analyzed, analyzed + 1,
         {VerdictKind::Diverged, 0, std::numeric_limits<double>::infinity(), analyzed, analyzed + 1});
  }
  return segments;
}

/// Sample indices where the verdict changes (start of every segment but the first).
[[nodiscard]] inline std::vector<std::size_t> regime_changes(const std::vector<TransientSegment>& segments) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < segments.size(); ++i) out.push_back(segments[i].begin);
  return out;
}

/// Symmetric Hausdorff distance between two finite point sets on the line.
[[nodiscard]] inline double hausdorff_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
    double worst = 0.0;
    for (double x : from) {
      const auto it = std::lower_bound(to.begin(), to.end(), x);
      double nearest = std::numeric_limits<double>::infinity();
      if (it != to.end()) nearest = *it - x;
      if (it != to.begin()) nearest = std::min(nearest, x - *std::prev(it));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(sa, sb), directed(sb, sa));
}

struct BSDistanceProfile {
  std::vector<double> grid;
  /// Hausdorff distance per grid value; +inf where exactly one side diverged.
  std::vector<double> distance;
  /// True where exactly one of the two orbits diverged.
  std::vector<bool> mismatch;

  [[nodiscard]] double max_finite() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < distance.size(); ++i) {
      if (!mismatch[i]) best = std::max(best, distance[i]);
    }
    return best;
  }

  /// Mean over grid values in [lo, hi], skipping mismatches. NaN when empty.
  [[nodiscard]] double mean_over(double lo, double hi) const noexcept {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] >= lo && grid[i] <= hi && !mismatch[i]) {
        sum += distance[i];
        ++count;
      }
    }
    return count == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(count);
  }
};

[[nodiscard]] inline BSDistanceProfile bs_distance(const BifurcativeSet& a, const BifurcativeSet& b) {
  if (a.points.size() != b.points.size()) {
    throw std::invalid_argument("bifurcative sets are defined on grids of different length");
  }
  BSDistanceProfile out;
  out.grid.reserve(a.points.size());
  out.distance.reserve(a.points.size());
  out.mismatch.reserve(a.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const GridPoint& pa = a.points[i];
    const GridPoint& pb = b.points[i];
    if (pa.grid_value != pb.grid_value) {
      std::ostringstream msg;
      msg << "grid mismatch at index " << i << ": " << pa.grid_value << " vs " << pb.grid_value;
      throw std::invalid_argument(msg.str());
    }
    out.grid.push_back(pa.grid_value);
    if (pa.diverged != pb.diverged) {
      out.distance.push_back(std::numeric_limits<double>::infinity());
      out.mismatch.push_back(true);
    } else if (pa.diverged) {
      out.distance.push_back(0.0);
      out.mismatch.push_back(false);
    } else {
      out.distance.push_back(hausdorff_distance(pa.tail, pb.tail));
      out.mismatch.push_back(false);
    }
  }
  return out;
}

/// Spread of a tail set (max - min); +inf for diverged points.
[[nodiscard]] inline double tail_diameter(const GridPoint& point) noexcept {
  if (point.diverged || point.tail.empty()) return std::numeric_limits<double>::infinity();
  const auto [lo, hi] = std::minmax_element(point.tail.begin(), point.tail.end());
  return *hi - *lo;
}

/// Smallest grid value whose tail diameter exceeds `tol` after an earlier grid
/// value was at or below it. Diverged points are skipped. nullopt when the
/// grid contains no such transition.
[[nodiscard]] inline std::optional<double> first_bifurcation_point(const BifurcativeSet& bs, double tol) {
  bool seen_collapsed = false;
  for (const GridPoint& point : bs.points) {
    if (point.diverged) continue;
    if (tail_diameter(point) <= tol) {
      seen_collapsed = true;
    } else if (seen_collapsed) {
      return point.grid_value;
    }
  }
  return std::nullopt;
}

}  // namespace fracmap
