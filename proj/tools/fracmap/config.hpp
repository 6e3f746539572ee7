#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fracmap/maps.hpp"
#include "fracmap/solver.hpp"
#include "fracmap/sweep.hpp"

namespace fracmap::app {

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable/unwritable files or malformed input data.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Orbit, Bifurcation, Analyze, CompareBs, KernelCheck, Repro };
enum class OutputFormat { Csv, Json };

[[nodiscard]] std::string_view to_string(Command command) noexcept;
[[nodiscard]] std::optional<Command> parse_command(std::string_view name) noexcept;

/// Inclusive linear grid lo:hi:points.
struct GridSpec {
  double lo = 1.3;
  double hi = 2.5;
  std::size_t points = 600;

  [[nodiscard]] std::vector<double> values() const;
  bool operator==(const GridSpec&) const = default;
};

/// Parses "lo:hi:points".
[[nodiscard]] GridSpec parse_grid(std::string_view text);

struct MapSection {
  MapFamily family = MapFamily::Logistic;
  double param = 2.4;
  bool operator==(const MapSection&) const = default;
};

struct OrbitSection {
  double q = 0.5;
  std::vector<double> x0{0.5};
  std::size_t n_max = 2500;
  double divergence_threshold = kDefaultDivergenceThreshold;
  bool operator==(const OrbitSection&) const = default;
};

struct SweepSection {
  SweepAxis axis = SweepAxis::ParamP;
  GridSpec grid;
  std::size_t tail = 200;
  bool operator==(const SweepSection&) const = default;
};

struct AnalysisSection {
  std::size_t window = 400;
  std::size_t stride = 100;
  std::size_t max_period = 64;
  double tol = 1e-4;
  double similarity_tol = 0.005;
  /// The two initial conditions compared by compare-bs (empty: first two in file).
  std::vector<double> compare;
  bool operator==(const AnalysisSection&) const = default;
};

struct KernelSection {
  std::size_t n_max = 250;
  bool operator==(const KernelSection&) const = default;
};

struct ReproSection {
  std::string figure;
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> points;
  bool operator==(const ReproSection&) const = default;
};

struct IoSection {
  std::string out = "out";
  OutputFormat format = OutputFormat::Csv;
  std::string input;
  bool operator==(const IoSection&) const = default;
};

struct RunConfig {
  Command command = Command::Orbit;
  MapSection map;
  OrbitSection orbit;
  SweepSection sweep;
  AnalysisSection analysis;
  KernelSection kernel;
  ReproSection repro;
  IoSection io;
  /// 0 selects one thread per hardware thread.
  unsigned threads = 0;
  bool seedless = false;

  bool operator==(const RunConfig&) const = default;
};

[[nodiscard]] nlohmann::json to_json(const RunConfig& config);

/// Missing keys keep their defaults; unknown keys and ill-typed values raise
/// ConfigError naming the field path.
[[nodiscard]] RunConfig config_from_json(const nlohmann::json& j);

/// Reads a JSON config file. Parse errors report line and column.
[[nodiscard]] RunConfig load_config_file(const std::string& path);

/// Command-specific validation; throws ConfigError.
void validate(const RunConfig& config);

/// Figure ids understood by `repro`.
[[nodiscard]] const std::vector<std::string>& known_figures();

/// Sweep configuration derived from the map/orbit/sweep sections.
[[nodiscard]] SweepConfig make_sweep_config(const RunConfig& config);

}  // namespace fracmap::app
