#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace fracmap {

enum class MapFamily { Logistic, Puu, Custom };

[[nodiscard]] constexpr std::string_view to_string(MapFamily family) noexcept {
  switch (family) {
    case MapFamily::Logistic: return "logistic";
    case MapFamily::Puu: return "puu";
    case MapFamily::Custom: return "custom";
  }
  return "unknown";
}

[[nodiscard]] inline std::optional<MapFamily> parse_map_family(std::string_view name) noexcept {
  if (name == "logistic") return MapFamily::Logistic;
  if (name == "puu") return MapFamily::Puu;
  if (name == "custom") return MapFamily::Custom;
  return std::nullopt;
}

/// A one-parameter family of scalar nonlinearities f(x) driving the fractional
/// iteration. Stateless value type.
///
///   logistic: f(x) = p * x * (1 - x)
///   puu:      f(x) = a * x - (a + 1) * x^3,   a >= 0
///   custom:   f(x) = fn(x, param), fn pure
class MapSpec {
 public:
  using CustomFn = std::function<double(double x, double param)>;

  [[nodiscard]] static MapSpec logistic(double p) { return MapSpec(MapFamily::Logistic, p, {}); }

  [[nodiscard]] static MapSpec puu(double a) { return MapSpec(MapFamily::Puu, a, {}); }

  [[nodiscard]] static MapSpec custom(CustomFn fn, double param = 0.0) {
    if (!fn) throw std::invalid_argument("custom map requires a callable");
    return MapSpec(MapFamily::Custom, param, std::move(fn));
  }

  /// Same family with another parameter value (used by parameter sweeps).
  [[nodiscard]] MapSpec with_param(double param) const { return MapSpec(family_, param, fn_); }

  [[nodiscard]] MapFamily family() const noexcept { return family_; }
  [[nodiscard]] double param() const noexcept { return param_; }

  /// Unchecked evaluation for inner loops.
  [[nodiscard]] double operator()(double x) const {
    switch (family_) {
      case MapFamily::Logistic: return param_ * x * (1.0 - x);
      case MapFamily::Puu: return param_ * x - (param_ + 1.0) * (x * x * x);
      case MapFamily::Custom: return fn_(x, param_);
    }
    return std::nan("");
  }

 private:
  MapSpec(MapFamily family, double param, CustomFn fn)
      : family_(family), param_(param), fn_(std::move(fn)) {
    if (!std::isfinite(param)) throw std::invalid_argument("map parameter must be finite");
    if (family == MapFamily::Puu && param < 0.0) {
      std::ostringstream msg;
      msg << "puu parameter a must be non-negative, got " << param;
      throw std::invalid_argument(msg.str());
    }
  }

  MapFamily family_;
  double param_;
  CustomFn fn_;
};

/// Checked evaluation: rejects non-finite input.
[[nodiscard]] inline double eval_map(const MapSpec& spec, double x) {
  if (!std::isfinite(x)) throw std::domain_error("map argument must be finite");
  return spec(x);
}

}  // namespace fracmap
