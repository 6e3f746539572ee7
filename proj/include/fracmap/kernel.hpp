#pragma once

// Memory-kernel weights of the Caputo-like fractional difference iteration.
//
// For a fractional order q in (0, 1], the normalized weight at lag k is
//
//     c[k] = Gamma(k + q) / (Gamma(q) * Gamma(k + 1)),
//
// so that c[0] = 1 and c[k] = c[k-1] * (k - 1 + q) / k. Three evaluation
// strategies are provided: the multiplicative recurrence (production), the
// log-gamma difference (cross-check), and the direct gamma quotient, which
// overflows once Gamma(k + 1) leaves the double range (k >= 171).

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracmap/summation.hpp"

namespace fracmap {

/// Fractional order q, restricted to (0, 1]. q = 1 is the integer-order limit.
class FractionalOrder {
 public:
  explicit FractionalOrder(double q) : q_(q) {
    if (!(q > 0.0 && q <= 1.0)) {
      std::ostringstream msg;
      msg << "fractional order must lie in (0, 1], got " << q;
      throw std::invalid_argument(msg.str());
    }
  }

  [[nodiscard]] double value() const noexcept { return q_; }
  [[nodiscard]] bool is_integer_limit() const noexcept { return q_ == 1.0; }

  friend bool operator==(FractionalOrder, FractionalOrder) = default;
  friend auto operator<=>(FractionalOrder, FractionalOrder) = default;

 private:
  double q_;
};

/// Normalized kernel weights c[0..n_max) for one fractional order. Immutable.
class KernelWeights {
 public:
  KernelWeights(FractionalOrder q, std::vector<double> c) : q_(q), c_(std::move(c)) {}

  [[nodiscard]] FractionalOrder order() const noexcept { return q_; }
  [[nodiscard]] std::size_t size() const noexcept { return c_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const noexcept { return c_[k]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return c_; }

 private:
  FractionalOrder q_;
  std::vector<double> c_;
};

namespace detail {
inline void require_horizon(std::size_t n_max) {
  if (n_max < 1) throw std::invalid_argument("kernel length n_max must be >= 1");
}
}  // namespace detail

/// Production path: c[k] = c[k-1] * (k - 1 + q) / k.
[[nodiscard]] inline KernelWeights weights_recurrence(FractionalOrder q, std::size_t n_max) {
  detail::require_horizon(n_max);
  std::vector<double> c(n_max);
  c[0] = 1.0;
  const double qv = q.value();
  for (std::size_t k = 1; k < n_max; ++k) {
    const auto kd = static_cast<double>(k);
    c[k] = c[k - 1] * (kd - 1.0 + qv) / kd;
  }
  return {q, std::move(c)};
}

/// c[k] = exp(lnGamma(k + q) - lnGamma(k + 1)) / Gamma(q). The log-gammas are
/// taken in extended precision; their absolute error otherwise grows with
/// lnGamma(k) and spoils the relative accuracy of the difference.
[[nodiscard]] inline KernelWeights weights_loggamma(FractionalOrder q, std::size_t n_max) {
  detail::require_horizon(n_max);
  std::vector<double> c(n_max);
  const long double qv = q.value();
  const long double lg_q = std::lgamma(qv);
  for (std::size_t k = 0; k < n_max; ++k) {
    const auto kd = static_cast<long double>(k);
    c[k] = static_cast<double>(std::exp(std::lgamma(kd + qv) - std::lgamma(kd + 1.0L) - lg_q));
  }
  return {q, std::move(c)};
}

/// Naive Gamma(k + q) / Gamma(k + 1) / Gamma(q). Entries whose gammas overflow
/// are kept (inf or nan) and flagged.
struct DirectWeights {
  FractionalOrder q;
  std::vector<double> values;
  std::vector<bool> finite;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }

  /// Index of the first flagged entry, if any.
  [[nodiscard]] std::optional<std::size_t> first_non_finite() const {
    for (std::size_t k = 0; k < finite.size(); ++k) {
      if (!finite[k]) return k;
    }
    return std::nullopt;
  }
};

[[nodiscard]] inline DirectWeights weights_direct(FractionalOrder q, std::size_t n_max) {
  detail::require_horizon(n_max);
  DirectWeights out{q, std::vector<double>(n_max), std::vector<bool>(n_max)};
  const double qv = q.value();
  const double gamma_q = std::tgamma(qv);
  for (std::size_t k = 0; k < n_max; ++k) {
    const auto kd = static_cast<double>(k);
    const double num = std::tgamma(kd + qv);
    const double den = std::tgamma(kd + 1.0);
    const double ck = num / den / gamma_q;
    out.values[k] = ck;
    out.finite[k] = std::isfinite(num) && std::isfinite(den) && std::isfinite(ck);
  }
  return out;
}

/// Un-normalized partial sum S(n) = sum_{k<n} Gamma(k + q) / Gamma(k + 1), i.e. the
/// kernel sum with a constant unit forcing. Evaluated as Gamma(q) times the sum of
/// recurrence weights, ascending in k.
[[nodiscard]] inline double partial_kernel_sum(FractionalOrder q, std::size_t n) {
  detail::require_horizon(n);
  const KernelWeights w = weights_recurrence(q, n);
  double total = 0.0;
  if (n > kCompensationThreshold) {
    CompensatedSum acc;
    for (double c : w.values()) acc.add(c);
    total = acc.value();
  } else {
    PlainSum acc;
    for (double c : w.values()) acc.add(c);
    total = acc.value();
  }
  return std::tgamma(q.value()) * total;
}

}  // namespace fracmap
