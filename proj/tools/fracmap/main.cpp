#include <iostream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "app.hpp"
#include "config.hpp"
#include "fracmap/version.hpp"

namespace {

using fracmap::MapFamily;
using fracmap::SweepAxis;
using namespace fracmap::app;

/// --config may appear anywhere; it seeds the config before flags are applied.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg(argv[i]);
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.starts_with("--config=")) return std::string(arg.substr(9));
  }
  return {};
}

struct Choices {
  std::string threads;
  std::string format;
  std::string family;
  std::string axis;
  std::string grid;
};

void add_common(CLI::App* sub, RunConfig& cfg, Choices& ch) {
  sub->add_option("--out", cfg.io.out, "Output directory");
  sub->add_option("--format", ch.format, "Data file format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", ch.threads, "Worker threads for sweeps (count or 'auto')");
  sub->add_flag("--seedless", cfg.seedless, "Assert that no random number generator is used");
}

void add_map(CLI::App* sub, RunConfig& cfg, Choices& ch) {
  sub->add_option("--map", ch.family, "Map family")->check(CLI::IsMember({"logistic", "puu"}));
  sub->add_option("--param", cfg.map.param, "Map parameter (p for logistic, a for puu)");
  sub->add_option("--q", cfg.orbit.q, "Fractional order in (0, 1]");
  sub->add_option("--x0", cfg.orbit.x0, "Initial condition(s), comma separated")->delimiter(',');
  sub->add_option("--n-max", cfg.orbit.n_max, "Iteration horizon");
  sub->add_option("--divergence-threshold", cfg.orbit.divergence_threshold, "Divergence threshold on |x|");
}

void add_analysis(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--window", cfg.analysis.window, "Periodicity window (samples)");
  sub->add_option("--stride", cfg.analysis.stride, "Sliding window stride");
  sub->add_option("--max-period", cfg.analysis.max_period, "Largest period tested");
  sub->add_option("--tol", cfg.analysis.tol, "Periodicity tolerance");
  sub->add_option("--similarity-tol", cfg.analysis.similarity_tol, "Tail-set similarity tolerance");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  const std::string config_path = find_config_path(argc, argv);
  if (!config_path.empty()) {
    try {
      cfg = load_config_file(config_path);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfigError;
    } catch (const IoError& e) {
      std::cerr << "I/O error: " << e.what() << '\n';
      return kExitIoError;
    }
  }

  CLI::App app{"Caputo-like fractional-order map simulator"};
  app.set_version_flag("--version", std::string(fracmap::kVersion));
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string ignored_config;
  app.add_option("--config", ignored_config, "JSON run configuration (flags override its values)");
  Choices ch;

  auto* orbit = app.add_subcommand("orbit", "Compute orbits of the fractional map");
  add_map(orbit, cfg, ch);
  add_common(orbit, cfg, ch);

  auto* bif = app.add_subcommand("bifurcation", "Sweep a bifurcation diagram over p or q");
  add_map(bif, cfg, ch);
  add_common(bif, cfg, ch);
  bif->add_option("--axis", ch.axis, "Swept axis")->check(CLI::IsMember({"p", "q"}));
  bif->add_option("--grid", ch.grid, "Grid as <lo>:<hi>:<points>");
  bif->add_option("--tail", cfg.sweep.tail, "Tail samples kept per orbit");

  auto* analyze = app.add_subcommand("analyze", "Classify periodicity/transients of an orbit or diagram CSV");
  analyze->add_option("input", cfg.io.input, "Orbit or diagram CSV")->required();
  add_analysis(analyze, cfg);
  add_common(analyze, cfg, ch);

  auto* compare = app.add_subcommand("compare-bs", "Per-grid Hausdorff distance between two bifurcative sets");
  compare->add_option("input", cfg.io.input, "Diagram CSV")->required();
  compare->add_option("--x0", cfg.analysis.compare, "The two initial conditions to compare")->delimiter(',');
  compare->add_option("--similarity-tol", cfg.analysis.similarity_tol, "Tail-set similarity tolerance");
  add_common(compare, cfg, ch);

  auto* kernel = app.add_subcommand("kernel-check", "Dump kernel weights from all three evaluation paths");
  kernel->add_option("--q", cfg.orbit.q, "Fractional order in (0, 1]");
  kernel->add_option("--n-max", cfg.kernel.n_max, "Number of weights");
  add_common(kernel, cfg, ch);

  auto* repro = app.add_subcommand("repro", "Regenerate the datasets behind a figure");
  repro->add_option("figure", cfg.repro.figure, "Figure id (fig1 .. fig9)")->required();
  repro->add_option("--n-max", cfg.repro.n_max, "Override the preset iteration horizon");
  repro->add_option("--points", cfg.repro.points, "Override the preset grid resolution");
  repro->add_option("--tail", cfg.sweep.tail, "Tail samples kept per orbit");
  add_analysis(repro, cfg);
  add_common(repro, cfg, ch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  const std::map<CLI::App*, Command> commands{{orbit, Command::Orbit},     {bif, Command::Bifurcation},
                                              {analyze, Command::Analyze}, {compare, Command::CompareBs},
                                              {kernel, Command::KernelCheck}, {repro, Command::Repro}};
  for (const auto& [sub, command] : commands) {
    if (sub->parsed()) cfg.command = command;
  }

  try {
    if (!ch.grid.empty()) cfg.sweep.grid = parse_grid(ch.grid);
    if (!ch.format.empty()) cfg.io.format = ch.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (!ch.family.empty()) cfg.map.family = ch.family == "puu" ? MapFamily::Puu : MapFamily::Logistic;
    if (!ch.axis.empty()) cfg.sweep.axis = ch.axis == "q" ? SweepAxis::OrderQ : SweepAxis::ParamP;
    const std::string& threads = ch.threads;
    if (!threads.empty()) {
      if (threads == "auto") {
        cfg.threads = 0;
      } else {
        std::size_t used = 0;
        const unsigned long value = std::stoul(threads, &used);
        if (used != threads.size()) throw std::invalid_argument(threads);
        cfg.threads = static_cast<unsigned>(value);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception&) {
    std::cerr << "config error: field 'threads': expected a count or 'auto', got '" << ch.threads << "'\n";
    return kExitConfigError;
  }

  return run(cfg, std::cout, std::cerr);
}
