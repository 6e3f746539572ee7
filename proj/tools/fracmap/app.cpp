#include "app.hpp"

#include <chrono>
#include <filesystem>
#include <ostream>

#include "fracmap/kernel.hpp"
#include "fracmap/version.hpp"

namespace fracmap::app {

using nlohmann::json;

namespace {

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string family_text(MapFamily family) { return std::string(to_string(family)); }

}  // namespace

json provenance_config(const RunConfig& config) {
  json j = to_json(config);
  j.erase("threads");
  j["io"].erase("out");
  return j;
}

// --- orbits ---------------------------------------------------------------

Meta orbit_meta(const OrbitProblem& problem, const Orbit& orbit) {
  return {{"q", format_double(problem.q.value())},
          {"map", family_text(problem.map.family())},
          {"param", format_double(problem.map.param())},
          {"x0", format_double(problem.x0)},
          {"n_max", std::to_string(problem.n_max)},
          {"divergence_threshold", format_double(problem.divergence_threshold)},
          {"diverged", bool_text(orbit.diverged)}};
}

std::string orbit_csv(const Orbit& orbit, const Meta& meta) {
  CsvBuilder csv(meta, {"n", "x"});
  for (std::size_t n = 0; n < orbit.samples.size(); ++n) csv.row(n, orbit.samples[n]);
  return std::move(csv).str();
}

json orbit_json(const Orbit& orbit, const Meta& meta) {
  json j;
  j["meta"] = json::object();
  for (const auto& [k, v] : meta) j["meta"][k] = v;
  j["diverged"] = orbit.diverged;
  j["divergence_index"] = orbit.divergence_index ? json(*orbit.divergence_index) : json(nullptr);
  j["x"] = orbit.samples;
  return j;
}

Orbit read_orbit(const CsvTable& table) {
  const std::size_t nc = table.column("n");
  const std::size_t xc = table.column("x");
  Orbit orbit;
  orbit.samples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (static_cast<std::size_t>(table.number(r, nc)) != r) {
      throw IoError("orbit CSV row " + std::to_string(r + 1) + ": expected n=" + std::to_string(r));
    }
    orbit.samples.push_back(table.number(r, xc));
  }
  if (orbit.samples.empty()) throw IoError("orbit CSV contains no samples");
  const auto it = table.meta.find("diverged");
  if (it != table.meta.end() && it->second == "true") {
    orbit.diverged = true;
    orbit.divergence_index = orbit.samples.size() - 1;
  }
  return orbit;
}

// --- diagrams -------------------------------------------------------------

Meta diagram_meta(const SweepConfig& config) {
  return {{"axis", config.axis == SweepAxis::ParamP ? "p" : "q"},
          {"fixed", format_double(config.fixed_value)},
          {"map", family_text(config.map.family())},
          {"n_max", std::to_string(config.n_max)},
          {"tail", std::to_string(config.tail_length)},
          {"divergence_threshold", format_double(config.divergence_threshold)},
          {"x0", join_doubles(config.initial_conditions)}};
}

std::string diagram_csv(const BifurcationDiagram& diagram, const Meta& meta) {
  CsvBuilder csv(meta, {"grid_value", "x0", "tail_sample", "diverged"});
  for (const auto& set : diagram.sets) {
    for (const auto& point : set.points) {
      if (point.diverged) {
        csv.row(point.grid_value, set.x0, "", true);
      } else {
        for (double x : point.tail) csv.row(point.grid_value, set.x0, x, false);
      }
    }
  }
  return std::move(csv).str();
}

json diagram_json(const BifurcationDiagram& diagram, const Meta& meta) {
  json j;
  j["meta"] = json::object();
  for (const auto& [k, v] : meta) j["meta"][k] = v;
  j["grid"] = diagram.config.grid;
  j["sets"] = json::array();
  for (const auto& set : diagram.sets) {
    json s;
    s["x0"] = set.x0;
    s["points"] = json::array();
    for (const auto& point : set.points) {
      s["points"].push_back({{"grid_value", point.grid_value},
                             {"diverged", point.diverged},
                             {"divergence_index",
                              point.divergence_index ? json(*point.divergence_index) : json(nullptr)},
                             {"tail", point.tail}});
    }
    j["sets"].push_back(std::move(s));
  }
  return j;
}

std::vector<BifurcativeSet> read_diagram(const CsvTable& table) {
  const std::size_t gc = table.column("grid_value");
  const std::size_t x0c = table.column("x0");
  const std::size_t xc = table.column("tail_sample");
  const std::size_t dc = table.column("diverged");
  std::vector<BifurcativeSet> sets;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double g = table.number(r, gc);
    const double x0 = table.number(r, x0c);
    const bool diverged = table.rows[r][dc] == "1";
    auto it = std::find_if(sets.begin(), sets.end(), [&](const BifurcativeSet& s) { return s.x0 == x0; });
    if (it == sets.end()) {
      sets.push_back(BifurcativeSet{x0, {}});
      it = std::prev(sets.end());
    }
    if (it->points.empty() || it->points.back().grid_value != g) {
      it->points.push_back(GridPoint{g, diverged, std::nullopt, {}});
    }
    if (!diverged) it->points.back().tail.push_back(table.number(r, xc));
  }
  if (sets.empty()) throw IoError("diagram CSV contains no rows");
  return sets;
}

std::string color_key(std::size_t index) {
  static const char* const palette[] = {"green", "blue", "red", "magenta", "orange", "cyan", "black"};
  constexpr std::size_t n = std::size(palette);
  return index < n ? palette[index] : "c" + std::to_string(index);
}

std::string diagram_plot_csv(const BifurcationDiagram& diagram, const Meta& meta, bool upper_half_only) {
  CsvBuilder csv(meta, {"grid_value", "x", "x0", "color"});
  for (std::size_t j = 0; j < diagram.sets.size(); ++j) {
    const auto& set = diagram.sets[j];
    const std::string color = color_key(j);
    for (const auto& point : set.points) {
      if (point.diverged) continue;
      for (double x : point.tail) {
        if (upper_half_only && x < 0.0) continue;
        csv.row(point.grid_value, x, set.x0, color);
      }
    }
  }
  return std::move(csv).str();
}

std::string distance_csv(const BSDistanceProfile& profile, const Meta& meta) {
  CsvBuilder csv(meta, {"grid_value", "distance", "mismatch"});
  for (std::size_t i = 0; i < profile.grid.size(); ++i) {
    csv.row(profile.grid[i], profile.distance[i], static_cast<bool>(profile.mismatch[i]));
  }
  return std::move(csv).str();
}

json verdict_json(const PeriodVerdict& v) {
  json j{{"kind", std::string(to_string(v.kind))},
         {"window", {v.window_begin, v.window_end}}};
  if (v.kind == VerdictKind::FixedPointLike || v.kind == VerdictKind::NumericallyPeriodic) {
    j["period"] = v.period;
  }
  j["residual"] = std::isfinite(v.residual) ? json(v.residual) : json(nullptr);
  return j;
}

json segments_json(const std::vector<TransientSegment>& segments) {
  json arr = json::array();
  for (const auto& s : segments) arr.push_back({{"begin", s.begin}, {"end", s.end}, {"verdict", verdict_json(s.verdict)}});
  return arr;
}

namespace {

json analysis_settings(const AnalysisSection& a) {
  return {{"window", a.window},
          {"stride", a.stride},
          {"max_period", a.max_period},
          {"tol", a.tol},
          {"similarity_tol", a.similarity_tol}};
}

// --- subcommands ------------------------------------------------------------

int cmd_orbit(const RunConfig& config, OutputSet& files, std::ostream& out) {
  const FractionalOrder q(config.orbit.q);
  const MapSpec map = config.map.family == MapFamily::Puu ? MapSpec::puu(config.map.param)
                                                          : MapSpec::logistic(config.map.param);
  const KernelWeights weights = weights_recurrence(q, config.orbit.n_max);
  std::size_t diverged = 0;
  const std::size_t count = config.orbit.x0.size();
  for (std::size_t i = 0; i < count; ++i) {
    const OrbitProblem problem{q, map, config.orbit.x0[i], config.orbit.n_max, config.orbit.divergence_threshold};
    const Orbit orbit = solve_orbit(problem, weights);
    const Meta meta = orbit_meta(problem, orbit);
    const std::string stem = count == 1 ? "orbit" : "orbit_" + std::to_string(i);
    if (config.io.format == OutputFormat::Csv) {
      files.add(stem + ".csv", orbit_csv(orbit, meta));
    } else {
      files.add_json(stem + ".json", orbit_json(orbit, meta));
    }
    out << "x0=" << format_double(problem.x0) << ": " << orbit.size() << " samples";
    if (orbit.diverged) {
      ++diverged;
      out << ", diverged at n=" << *orbit.divergence_index;
    }
    out << '\n';
  }
  return diverged == count ? kExitAllDiverged : kExitOk;
}

int cmd_bifurcation(const RunConfig& config, OutputSet& files, std::ostream& out) {
  const SweepConfig sweep = make_sweep_config(config);
  const BifurcationDiagram diagram = run_sweep(sweep, config.threads);
  const Meta meta = diagram_meta(sweep);
  if (config.io.format == OutputFormat::Csv) {
    files.add("diagram.csv", diagram_csv(diagram, meta));
  } else {
    files.add_json("diagram.json", diagram_json(diagram, meta));
  }
  for (const auto& set : diagram.sets) {
    out << "x0=" << format_double(set.x0) << ": " << set.points.size() << " grid points, " << set.diverged_count()
        << " diverged\n";
  }
  return diagram.all_diverged() ? kExitAllDiverged : kExitOk;
}

int cmd_analyze(const RunConfig& config, OutputSet& files, std::ostream& out) {
  const CsvTable table = read_csv(config.io.input);
  const AnalysisSection& a = config.analysis;
  json result;
  result["settings"] = analysis_settings(a);
  if (table.has_column("n")) {
    const Orbit orbit = read_orbit(table);
    result["kind"] = "orbit";
    const std::size_t analyzable = orbit.diverged ? *orbit.divergence_index : orbit.size();
    if (a.window > analyzable) {
      throw ConfigError("field 'analysis.window': " + std::to_string(a.window) + " exceeds the " +
                        std::to_string(analyzable) + " analyzable samples");
    }
    const PeriodVerdict verdict = detect_period(orbit, a.window, a.max_period, a.tol);
    const auto segments = segment_transients(orbit, a.window, a.stride, a.max_period, a.tol);
    result["verdict"] = verdict_json(verdict);
    result["segments"] = segments_json(segments);
    result["regime_changes"] = regime_changes(segments);
    out << "verdict: " << to_string(verdict.kind);
    if (verdict.period) out << " (period " << verdict.period << ")";
    out << ", " << segments.size() << " segment(s)\n";
  } else if (table.has_column("grid_value")) {
    const auto sets = read_diagram(table);
    const auto axis_it = table.meta.find("axis");
    const bool p_axis = axis_it != table.meta.end() && axis_it->second == "p";
    result["kind"] = "diagram";
    result["sets"] = json::array();
    for (const auto& set : sets) {
      json s;
      s["x0"] = set.x0;
      s["points"] = json::array();
      for (const auto& point : set.points) {
        PeriodVerdict v{VerdictKind::Diverged, 0, std::numeric_limits<double>::infinity(), 0, 0};
        if (!point.diverged) v = classify_window(point.tail, point.tail.size(), point.tail.size(), a.max_period, a.tol);
        s["points"].push_back({{"grid_value", point.grid_value}, {"verdict", verdict_json(v)}});
      }
      if (p_axis) {
        const auto fb = first_bifurcation_point(set, a.similarity_tol);
        s["first_bifurcation_point"] = fb ? json(*fb) : json(nullptr);
        out << "x0=" << format_double(set.x0) << ": first bifurcation "
            << (fb ? format_double(*fb) : std::string("none in grid")) << '\n';
      }
      result["sets"].push_back(std::move(s));
    }
  } else {
    throw IoError("input CSV is neither an orbit (n,x) nor a diagram (grid_value,x0,tail_sample,diverged)");
  }
  files.add_json("analysis.json", result);
  return kExitOk;
}

int cmd_compare_bs(const RunConfig& config, OutputSet& files, std::ostream& out) {
  const CsvTable table = read_csv(config.io.input);
  const auto sets = read_diagram(table);
  const BifurcativeSet* a = nullptr;
  const BifurcativeSet* b = nullptr;
  if (config.analysis.compare.empty()) {
    if (sets.size() < 2) throw ConfigError("field 'analysis.compare': input holds fewer than two bifurcative sets");
    a = &sets[0];
    b = &sets[1];
  } else {
    auto find = [&](double x0) {
      for (const auto& s : sets) {
        if (s.x0 == x0) return &s;
      }
      throw ConfigError("field 'analysis.compare': no bifurcative set for x0=" + format_double(x0));
    };
    a = find(config.analysis.compare[0]);
    b = find(config.analysis.compare[1]);
  }
  const BSDistanceProfile profile = bs_distance(*a, *b);
  Meta meta{{"x0_a", format_double(a->x0)},
            {"x0_b", format_double(b->x0)},
            {"metric", "hausdorff"},
            {"similarity_tol", format_double(config.analysis.similarity_tol)}};
  std::size_t dissimilar = 0;
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < profile.grid.size(); ++i) {
    if (profile.mismatch[i]) {
      ++mismatched;
    } else if (profile.distance[i] > config.analysis.similarity_tol) {
      ++dissimilar;
    }
  }
  if (config.io.format == OutputFormat::Csv) {
    files.add("bs_distance.csv", distance_csv(profile, meta));
  } else {
    json j;
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    j["grid"] = profile.grid;
    json d = json::array();
    for (double v : profile.distance) d.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    j["distance"] = d;
    j["mismatch"] = std::vector<bool>(profile.mismatch.begin(), profile.mismatch.end());
    files.add_json("bs_distance.json", j);
  }
  out << "max distance " << format_double(profile.max_finite()) << ", " << dissimilar << " of "
      << profile.grid.size() << " grid points above " << format_double(config.analysis.similarity_tol) << ", "
      << mismatched << " divergence mismatches\n";
  return kExitOk;
}

int cmd_kernel_check(const RunConfig& config, OutputSet& files, std::ostream& out) {
  const FractionalOrder q(config.orbit.q);
  const std::size_t n = config.kernel.n_max;
  const DirectWeights direct = weights_direct(q, n);
  const KernelWeights lg = weights_loggamma(q, n);
  const KernelWeights rec = weights_recurrence(q, n);
  const Meta meta{{"q", format_double(q.value())}, {"n_max", std::to_string(n)}};
  if (config.io.format == OutputFormat::Csv) {
    CsvBuilder csv(meta, {"k", "c_direct", "c_loggamma", "c_recurrence", "direct_finite"});
    for (std::size_t k = 0; k < n; ++k) {
      csv.row(k, direct.values[k], lg[k], rec[k], static_cast<bool>(direct.finite[k]));
    }
    files.add("kernel_check.csv", std::move(csv).str());
  } else {
    json j;
    for (const auto& [key, v] : meta) j["meta"][key] = v;
    json d = json::array();
    for (double v : direct.values) d.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    j["c_direct"] = d;
    j["c_loggamma"] = std::vector<double>(lg.values().begin(), lg.values().end());
    j["c_recurrence"] = std::vector<double>(rec.values().begin(), rec.values().end());
    j["direct_finite"] = std::vector<bool>(direct.finite.begin(), direct.finite.end());
    files.add_json("kernel_check.json", j);
  }
  if (const auto bad = direct.first_non_finite()) {
    out << "direct gamma quotient non-finite from k=" << *bad << '\n';
  } else {
    out << "direct gamma quotient finite for all k < " << n << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  try {
    validate(config);
    OutputSet files(config.io.out);
    int status = kExitOk;
    switch (config.command) {
      case Command::Orbit: status = cmd_orbit(config, files, out); break;
      case Command::Bifurcation: status = cmd_bifurcation(config, files, out); break;
      case Command::Analyze: status = cmd_analyze(config, files, out); break;
      case Command::CompareBs: status = cmd_compare_bs(config, files, out); break;
      case Command::KernelCheck: status = cmd_kernel_check(config, files, out); break;
      case Command::Repro: run_repro(config, files, out); break;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest{{"command", std::string(to_string(config.command))},
                  {"threads", resolve_threads(config.threads)},
                  {"out", config.io.out},
                  {"elapsed_seconds", elapsed}};
    files.commit(provenance_config(config), manifest);
    if (status == kExitAllDiverged) err << "warning: every orbit diverged\n";
    return status;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIoError;
  }
}

}  // namespace fracmap::app
