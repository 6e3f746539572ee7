#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fracmap::app {

using nlohmann::json;

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::Orbit: return "orbit";
    case Command::Bifurcation: return "bifurcation";
    case Command::Analyze: return "analyze";
    case Command::CompareBs: return "compare-bs";
    case Command::KernelCheck: return "kernel-check";
    case Command::Repro: return "repro";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (auto c : {Command::Orbit, Command::Bifurcation, Command::Analyze, Command::CompareBs, Command::KernelCheck,
                 Command::Repro}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

namespace {

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

GridSpec parse_grid(std::string_view text) {
  const auto bad = [&] {
    return ConfigError("field 'sweep.grid': expected <lo>:<hi>:<points>, got '" + std::string(text) + "'");
  };
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) throw bad();
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw bad();
  const auto lo = to_double(text.substr(0, c1));
  const auto hi = to_double(text.substr(c1 + 1, c2 - c1 - 1));
  const auto pts_text = text.substr(c2 + 1);
  std::size_t points = 0;
  const auto [ptr, ec] = std::from_chars(pts_text.data(), pts_text.data() + pts_text.size(), points);
  if (!lo || !hi || ec != std::errc() || ptr != pts_text.data() + pts_text.size()) throw bad();
  return GridSpec{*lo, *hi, points};
}

namespace {

std::string_view axis_name(SweepAxis axis) { return axis == SweepAxis::ParamP ? "p" : "q"; }
std::string_view format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

json optional_count(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const RunConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  j["map"] = {{"family", to_string(c.map.family)}, {"param", c.map.param}};
  j["orbit"] = {{"q", c.orbit.q},
                {"x0", c.orbit.x0},
                {"n_max", c.orbit.n_max},
                {"divergence_threshold", c.orbit.divergence_threshold}};
  j["sweep"] = {{"axis", axis_name(c.sweep.axis)},
                {"grid", {{"lo", c.sweep.grid.lo}, {"hi", c.sweep.grid.hi}, {"points", c.sweep.grid.points}}},
                {"tail", c.sweep.tail}};
  j["analysis"] = {{"window", c.analysis.window},
                   {"stride", c.analysis.stride},
                   {"max_period", c.analysis.max_period},
                   {"tol", c.analysis.tol},
                   {"similarity_tol", c.analysis.similarity_tol},
                   {"compare", c.analysis.compare}};
  j["kernel"] = {{"n_max", c.kernel.n_max}};
  j["repro"] = {{"figure", c.repro.figure},
                {"n_max", optional_count(c.repro.n_max)},
                {"points", optional_count(c.repro.points)}};
  j["io"] = {{"out", c.io.out}, {"format", format_name(c.io.format)}, {"input", c.io.input}};
  j["threads"] = c.threads;
  j["seedless"] = c.seedless;
  return j;
}

namespace {

/// Walks a JSON object, tracking the dotted path for error messages.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("field '" + display() + "': expected an object");
    for (const auto& [key, _] : j_.items()) unread_.insert(key);
  }

  ~Reader() = default;
  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  void finish() const {
    if (!unread_.empty()) throw ConfigError("unknown field '" + child(*unread_.begin()) + "'");
  }

  const json* find(const std::string& key) {
    unread_.erase(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void real(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key, "expected a number");
      out = v->get<double>();
    }
  }

  void count(const std::string& key, std::size_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(key, "expected a non-negative integer");
      out = v->get<std::size_t>();
    }
  }

  void optional_count(const std::string& key, std::optional<std::size_t>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_number_unsigned()) {
        out = v->get<std::size_t>();
      } else {
        fail(key, "expected a non-negative integer or null");
      }
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(key, "expected a string");
      out = v->get<std::string>();
    }
  }

  void flag(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key, "expected true or false");
      out = v->get<bool>();
    }
  }

  void reals(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(key, "expected an array of numbers");
      std::vector<double> values;
      for (const auto& e : *v) {
        if (!e.is_number()) fail(key, "expected an array of numbers");
        values.push_back(e.get<double>());
      }
      out = std::move(values);
    }
  }

  template <class F>
  void section(const std::string& key, F&& body) {
    if (const json* v = find(key)) {
      Reader sub(*v, child(key));
      body(sub);
      sub.finish();
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("field '" + child(key) + "': " + what);
  }

 private:
  [[nodiscard]] std::string display() const { return path_.empty() ? "<root>" : path_; }
  [[nodiscard]] std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
  std::set<std::string> unread_;
};

}  // namespace

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Reader root(j, "");
  std::string name;

  if (const json* v = root.find("command")) {
    if (!v->is_string()) root.fail("command", "expected a string");
    const auto cmd = parse_command(v->get<std::string>());
    if (!cmd) root.fail("command", "unknown subcommand '" + v->get<std::string>() + "'");
    c.command = *cmd;
  }
  root.section("map", [&](Reader& r) {
    name = std::string(to_string(c.map.family));
    r.text("family", name);
    const auto family = parse_map_family(name);
    if (!family || *family == MapFamily::Custom) r.fail("family", "expected 'logistic' or 'puu'");
    c.map.family = *family;
    r.real("param", c.map.param);
  });
  root.section("orbit", [&](Reader& r) {
    r.real("q", c.orbit.q);
    r.reals("x0", c.orbit.x0);
    r.count("n_max", c.orbit.n_max);
    r.real("divergence_threshold", c.orbit.divergence_threshold);
  });
  root.section("sweep", [&](Reader& r) {
    name = std::string(axis_name(c.sweep.axis));
    r.text("axis", name);
    if (name == "p") {
      c.sweep.axis = SweepAxis::ParamP;
    } else if (name == "q") {
      c.sweep.axis = SweepAxis::OrderQ;
    } else {
      r.fail("axis", "expected 'p' or 'q'");
    }
    r.section("grid", [&](Reader& g) {
      g.real("lo", c.sweep.grid.lo);
      g.real("hi", c.sweep.grid.hi);
      g.count("points", c.sweep.grid.points);
    });
    r.count("tail", c.sweep.tail);
  });
  root.section("analysis", [&](Reader& r) {
    r.count("window", c.analysis.window);
    r.count("stride", c.analysis.stride);
    r.count("max_period", c.analysis.max_period);
    r.real("tol", c.analysis.tol);
    r.real("similarity_tol", c.analysis.similarity_tol);
    r.reals("compare", c.analysis.compare);
  });
  root.section("kernel", [&](Reader& r) { r.count("n_max", c.kernel.n_max); });
  root.section("repro", [&](Reader& r) {
    r.text("figure", c.repro.figure);
    r.optional_count("n_max", c.repro.n_max);
    r.optional_count("points", c.repro.points);
  });
  root.section("io", [&](Reader& r) {
    r.text("out", c.io.out);
    name = std::string(format_name(c.io.format));
    r.text("format", name);
    if (name == "csv") {
      c.io.format = OutputFormat::Csv;
    } else if (name == "json") {
      c.io.format = OutputFormat::Json;
    } else {
      r.fail("format", "expected 'csv' or 'json'");
    }
    r.text("input", c.io.input);
  });
  if (const json* v = root.find("threads")) {
    if (!v->is_number_unsigned()) root.fail("threads", "expected a non-negative integer (0 = auto)");
    c.threads = v->get<unsigned>();
  }
  root.flag("seedless", c.seedless);
  root.finish();
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

const std::vector<std::string>& known_figures() {
  static const std::vector<std::string> figures{"fig1", "fig2", "fig3", "fig4", "fig5",
                                                "fig6", "fig7", "fig8", "fig9"};
  return figures;
}

namespace {

void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError("field '" + field + "': " + what);
}

void validate_map(const RunConfig& c) {
  check(c.map.family != MapFamily::Custom, "map.family", "custom maps are not available from the command line");
  check(std::isfinite(c.map.param), "map.param", "must be finite");
  check(c.map.family != MapFamily::Puu || c.map.param >= 0.0, "map.param", "puu parameter a must be >= 0");
}

void validate_orbit(const RunConfig& c) {
  check(c.orbit.q > 0.0 && c.orbit.q <= 1.0, "orbit.q", "must lie in (0, 1]");
  check(!c.orbit.x0.empty(), "orbit.x0", "at least one initial condition is required");
  for (double x : c.orbit.x0) check(std::isfinite(x), "orbit.x0", "initial conditions must be finite");
  check(c.orbit.n_max >= 1, "orbit.n_max", "must be >= 1");
  check(c.orbit.divergence_threshold > 0.0, "orbit.divergence_threshold", "must be > 0");
}

void validate_analysis(const RunConfig& c) {
  check(c.analysis.window >= 2, "analysis.window", "must be >= 2");
  check(c.analysis.stride >= 1, "analysis.stride", "must be >= 1");
  check(c.analysis.max_period >= 1, "analysis.max_period", "must be >= 1");
  check(c.analysis.tol >= 0.0, "analysis.tol", "must be >= 0");
  check(c.analysis.similarity_tol >= 0.0, "analysis.similarity_tol", "must be >= 0");
}

}  // namespace

void validate(const RunConfig& c) {
  check(!c.io.out.empty(), "io.out", "output directory must be set");
  validate_analysis(c);
  switch (c.command) {
    case Command::Orbit:
      validate_map(c);
      validate_orbit(c);
      break;
    case Command::Bifurcation: {
      validate_map(c);
      validate_orbit(c);
      check(c.sweep.grid.points >= 1, "sweep.grid", "needs at least one point");
      check(std::isfinite(c.sweep.grid.lo) && std::isfinite(c.sweep.grid.hi), "sweep.grid", "bounds must be finite");
      check(c.sweep.grid.points == 1 || c.sweep.grid.lo < c.sweep.grid.hi, "sweep.grid", "requires lo < hi");
      check(c.sweep.tail >= 1 && c.sweep.tail < c.orbit.n_max, "sweep.tail", "must satisfy 1 <= tail < n_max");
      if (c.sweep.axis == SweepAxis::OrderQ) {
        check(c.sweep.grid.lo > 0.0 && c.sweep.grid.hi <= 1.0, "sweep.grid", "q-axis grid must lie in (0, 1]");
      }
      std::set<double> seen(c.orbit.x0.begin(), c.orbit.x0.end());
      check(seen.size() == c.orbit.x0.size(), "orbit.x0", "initial conditions must be distinct");
      break;
    }
    case Command::Analyze:
      check(!c.io.input.empty(), "io.input", "an input CSV file is required");
      break;
    case Command::CompareBs:
      check(!c.io.input.empty(), "io.input", "an input CSV file is required");
      check(c.analysis.compare.empty() || c.analysis.compare.size() == 2, "analysis.compare",
            "expected exactly two initial conditions");
      break;
    case Command::KernelCheck:
      check(c.orbit.q > 0.0 && c.orbit.q <= 1.0, "orbit.q", "must lie in (0, 1]");
      check(c.kernel.n_max >= 1, "kernel.n_max", "must be >= 1");
      break;
    case Command::Repro: {
      const auto& figs = known_figures();
      check(std::find(figs.begin(), figs.end(), c.repro.figure) != figs.end(), "repro.figure",
            "unknown figure id '" + c.repro.figure + "'");
      check(!c.repro.n_max || *c.repro.n_max >= 2, "repro.n_max", "must be >= 2");
      check(!c.repro.points || *c.repro.points >= 1, "repro.points", "must be >= 1");
      break;
    }
  }
}

SweepConfig make_sweep_config(const RunConfig& c) {
  SweepConfig s;
  s.axis = c.sweep.axis;
  s.grid = c.sweep.grid.values();
  s.fixed_value = c.sweep.axis == SweepAxis::ParamP ? c.orbit.q : c.map.param;
  s.initial_conditions = c.orbit.x0;
  s.n_max = c.orbit.n_max;
  s.tail_length = c.sweep.tail;
  s.map = c.map.family == MapFamily::Puu ? MapSpec::puu(0.0) : MapSpec::logistic(0.0);
  s.divergence_threshold = c.orbit.divergence_threshold;
  return s;
}

}  // namespace fracmap::app
