#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace fracmap {

/// Sums with more terms than this use compensated accumulation.
inline constexpr std::size_t kCompensationThreshold = 10'000;

/// Neumaier's variant of Kahan summation. Order of `add` calls is significant
/// for bitwise reproducibility, so callers fix the order.
class CompensatedSum {
 public:
  void add(double term) noexcept {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class PlainSum {
 public:
  void add(double term) noexcept { sum_ += term; }
  [[nodiscard]] double value() const noexcept { return sum_; }

 private:
  double sum_ = 0.0;
};

/// Memory-kernel convolution: sum over k = 0..n-1 of weights[k] * history[n-1-k],
/// accumulated in ascending k. `history` holds the n most recent terms, oldest first.
template <class Accumulator>
[[nodiscard]] double convolve_ascending(std::span<const double> weights,
                                        std::span<const double> history) noexcept {
  Accumulator acc;
  const std::size_t n = history.size();
  for (std::size_t k = 0; k < n; ++k) {
    acc.add(weights[k] * history[n - 1 - k]);
  }
  return acc.value();
}

[[nodiscard]] inline double convolve_ascending(std::span<const double> weights,
                                               std::span<const double> history,
                                               bool compensated) noexcept {
  return compensated ? convolve_ascending<CompensatedSum>(weights, history)
                     : convolve_ascending<PlainSum>(weights, history);
}

}  // namespace fracmap
