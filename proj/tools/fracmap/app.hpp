#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "fracmap/analysis.hpp"
#include "fracmap/solver.hpp"
#include "fracmap/sweep.hpp"
#include "table_io.hpp"

namespace fracmap::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitIoError = 2;
inline constexpr int kExitAllDiverged = 3;

/// Executes one subcommand. Diagnostics go to `err`, summaries to `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// The config as echoed into provenance.json: everything that determines the
/// data (thread count and output directory excluded).
[[nodiscard]] nlohmann::json provenance_config(const RunConfig& config);

// Data file formats.

[[nodiscard]] Meta orbit_meta(const OrbitProblem& problem, const Orbit& orbit);
[[nodiscard]] std::string orbit_csv(const Orbit& orbit, const Meta& meta);
[[nodiscard]] nlohmann::json orbit_json(const Orbit& orbit, const Meta& meta);
[[nodiscard]] Orbit read_orbit(const CsvTable& table);

[[nodiscard]] Meta diagram_meta(const SweepConfig& config);
/// Long format: grid_value,x0,tail_sample,diverged. Diverged points give one row with an
/// empty tail_sample and diverged=1.
[[nodiscard]] std::string diagram_csv(const BifurcationDiagram& diagram, const Meta& meta);
[[nodiscard]] nlohmann::json diagram_json(const BifurcationDiagram& diagram, const Meta& meta);
/// Bifurcative sets in file order of first appearance of each x0.
[[nodiscard]] std::vector<BifurcativeSet> read_diagram(const CsvTable& table);

/// Plot-ready long format: grid_value,x,x0,color, one color key per x0.
[[nodiscard]] std::string diagram_plot_csv(const BifurcationDiagram& diagram, const Meta& meta,
                                           bool upper_half_only = false);

[[nodiscard]] std::string distance_csv(const BSDistanceProfile& profile, const Meta& meta);

[[nodiscard]] nlohmann::json verdict_json(const PeriodVerdict& verdict);
[[nodiscard]] nlohmann::json segments_json(const std::vector<TransientSegment>& segments);

/// Color key assigned to the i-th initial condition.
[[nodiscard]] std::string color_key(std::size_t index);

/// Emits the datasets for one figure preset into `out` (a subdirectory per figure).
void run_repro(const RunConfig& config, OutputSet& out, std::ostream& log);

}  // namespace fracmap::app
