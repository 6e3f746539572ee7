// Canned datasets for the fig1 .. fig9 presets.

#include <cmath>
#include <ostream>

#include "app.hpp"
#include "fracmap/kernel.hpp"

namespace fracmap::app {

using nlohmann::json;

namespace {

struct ReproContext {
  const RunConfig& config;
  OutputSet& files;
  std::ostream& log;

  [[nodiscard]] std::size_t n_max(std::size_t preset) const { return config.repro.n_max.value_or(preset); }
  [[nodiscard]] std::size_t points(std::size_t preset) const { return config.repro.points.value_or(preset); }
  [[nodiscard]] std::size_t tail(std::size_t n) const { return std::min(config.sweep.tail, n - 1); }
};

constexpr std::size_t kGridPoints = 600;

std::vector<double> q_grid(std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i + 1) / static_cast<double>(points);
  return g;
}

std::vector<double> p_grid(double lo, double hi, std::size_t points) { return GridSpec{lo, hi, points}.values(); }

json plot_description(const std::string& data, const std::string& x, const std::string& y, const std::string& x_label,
                      const std::string& title, bool colored) {
  json j{{"kind", "scatter"}, {"data", data}, {"x", x}, {"y", y}, {"x_label", x_label}, {"y_label", "x"},
         {"title", title}, {"marker_size", 0.5}};
  if (colored) j["color"] = "color";
  return j;
}

/// Sweep dataset + plot-ready file + plot description, all named after `stem`.
BifurcationDiagram emit_sweep(ReproContext& ctx, const std::string& stem, const SweepConfig& sweep,
                              const std::string& title, bool upper_half_only = false) {
  const BifurcationDiagram diagram = run_sweep(sweep, ctx.config.threads);
  Meta meta = diagram_meta(sweep);
  meta.insert(meta.begin(), {"figure", ctx.config.repro.figure});
  ctx.files.add(stem + ".csv", diagram_csv(diagram, meta));
  ctx.files.add(stem + "_plot.csv", diagram_plot_csv(diagram, meta, upper_half_only));
  const std::string axis = sweep.axis == SweepAxis::ParamP ? "p" : "q";
  ctx.files.add_json(stem + "_plot.json", plot_description(stem + "_plot.csv", "grid_value", "x", axis, title, true));
  for (const auto& set : diagram.sets) {
    ctx.log << stem << ": x0=" << format_double(set.x0) << ", " << set.diverged_count() << " of "
            << set.points.size() << " grid points diverged\n";
  }
  return diagram;
}

SweepConfig make_sweep(SweepAxis axis, std::vector<double> grid, double fixed, std::vector<double> x0, std::size_t n,
                       std::size_t tail, MapSpec map = MapSpec::logistic(0.0)) {
  SweepConfig s;
  s.axis = axis;
  s.grid = std::move(grid);
  s.fixed_value = fixed;
  s.initial_conditions = std::move(x0);
  s.n_max = n;
  s.tail_length = tail;
  s.map = std::move(map);
  return s;
}

/// Pairwise distances and first bifurcation points of a multi-x0 diagram.
void emit_comparison(ReproContext& ctx, const std::string& stem, const BifurcationDiagram& diagram) {
  const double tol = ctx.config.analysis.similarity_tol;
  json summary;
  summary["similarity_tol"] = tol;
  summary["pairs"] = json::array();
  for (std::size_t i = 0; i < diagram.sets.size(); ++i) {
    for (std::size_t j = i + 1; j < diagram.sets.size(); ++j) {
      const auto profile = bs_distance(diagram.sets[i], diagram.sets[j]);
      const std::string name = stem + "_distance_" + std::to_string(i) + "_" + std::to_string(j) + ".csv";
      ctx.files.add(name, distance_csv(profile, {{"x0_a", format_double(diagram.sets[i].x0)},
                                                 {"x0_b", format_double(diagram.sets[j].x0)},
                                                 {"metric", "hausdorff"}}));
      summary["pairs"].push_back({{"x0_a", diagram.sets[i].x0},
                                  {"x0_b", diagram.sets[j].x0},
                                  {"max_distance", profile.max_finite()},
                                  {"file", name}});
    }
  }
  if (diagram.config.axis == SweepAxis::ParamP) {
    summary["first_bifurcation_point"] = json::object();
    for (const auto& set : diagram.sets) {
      const auto fb = first_bifurcation_point(set, tol);
      summary["first_bifurcation_point"][format_double(set.x0)] = fb ? json(*fb) : json(nullptr);
    }
  }
  ctx.files.add_json(stem + "_summary.json", summary);
}

void fig1(ReproContext& ctx) {
  const std::size_t n = ctx.n_max(2500);
  const OrbitProblem problem{FractionalOrder(0.3), MapSpec::logistic(2.4), 0.5, n};
  const Orbit orbit = solve_orbit(problem);
  ctx.files.add("fig1_orbit.csv", orbit_csv(orbit, orbit_meta(problem, orbit)));
  const auto& a = ctx.config.analysis;
  if (!orbit.diverged && orbit.size() >= a.window) {
    const auto segments = segment_transients(orbit, a.window, a.stride, a.max_period, a.tol);
    ctx.files.add_json("fig1_segments.json", {{"segments", segments_json(segments)},
                                              {"regime_changes", regime_changes(segments)}});
    ctx.log << "fig1: " << segments.size() << " regime segment(s)\n";
  }
  ctx.files.add_json("fig1_plot.json", json{{"kind", "line"}, {"data", "fig1_orbit.csv"}, {"x", "n"}, {"y", "x"},
                                            {"x_label", "n"}, {"y_label", "x"},
                                            {"title", "FOLM time series, q=0.3, p=2.4"}});
}

void fig2(ReproContext& ctx) {
  const double q = 0.5;
  const std::size_t n = ctx.n_max(250);
  CsvBuilder csv({{"figure", "fig2"}, {"q", format_double(q)}, {"forcing", "1"}},
                 {"n", "sum_direct", "sum_loggamma", "direct_finite"});
  double direct = 0.0;
  double logg = 0.0;
  bool finite = true;
  for (std::size_t k = 0; k < n; ++k) {
    const auto kd = static_cast<double>(k);
    const double num = std::tgamma(kd + q);
    const double den = std::tgamma(kd + 1.0);
    finite = finite && std::isfinite(num) && std::isfinite(den);
    direct += num / den;
    logg += std::exp(std::lgamma(kd + q) - std::lgamma(kd + 1.0));
    csv.row(k + 1, direct, logg, finite && std::isfinite(direct));
  }
  ctx.files.add("fig2_kernel_sums.csv", std::move(csv).str());
  ctx.files.add_json("fig2_plot.json",
                     json{{"kind", "line"}, {"data", "fig2_kernel_sums.csv"}, {"x", "n"},
                          {"y", {"sum_direct", "sum_loggamma"}}, {"colors", {"red", "blue"}}, {"x_label", "n"},
                          {"y_label", "partial kernel sum"}, {"title", "direct vs log-gamma kernel sums"}});
  const auto w = weights_direct(FractionalOrder(q), n);
  if (const auto bad = w.first_non_finite()) ctx.log << "fig2: direct quotient non-finite from k=" << *bad << '\n';
}

void fig3(ReproContext& ctx) {
  const auto& a = ctx.config.analysis;
  const std::size_t n_iolm = 100;
  const Orbit iolm = solve_iolm(3.2, 0.1, n_iolm);
  ctx.files.add("fig3_iolm.csv", orbit_csv(iolm, {{"figure", "fig3"}, {"scheme", "iolm"}, {"param", "3.2"},
                                                   {"x0", "0.1"}, {"diverged", iolm.diverged ? "true" : "false"}}));
  const std::size_t n = ctx.n_max(3500);
  const OrbitProblem problem{FractionalOrder(0.25), MapSpec::logistic(1.8), 0.1, n};
  const Orbit folm = solve_orbit(problem);
  ctx.files.add("fig3_folm.csv", orbit_csv(folm, orbit_meta(problem, folm)));

  const std::size_t folm_window = std::min<std::size_t>(500, folm.size() / 2);
  json verdicts{{"iolm", verdict_json(detect_period(iolm, 50, a.max_period, a.tol))},
                {"folm", verdict_json(detect_period(folm, folm_window, a.max_period, a.tol))}};
  ctx.files.add_json("fig3_verdicts.json", verdicts);
  ctx.files.add_json("fig3_plot.json", json{{"kind", "line"}, {"data", {"fig3_iolm.csv", "fig3_folm.csv"}},
                                            {"x", "n"}, {"y", "x"}, {"title", "IOLM p=3.2 vs FOLM q=0.25, p=1.8"}});
}

void fig4(ReproContext& ctx) {
  const std::size_t n = ctx.n_max(2500);
  const std::size_t pts = ctx.points(kGridPoints);
  struct Case {
    const char* stem;
    double q;
    double lo;
    double hi;
  };
  for (const Case c : {Case{"fig4_q0.1", 0.1, -2.5, 2.5}, Case{"fig4_q0.5", 0.5, -2.5, 2.5},
                       Case{"fig4_q1", 1.0, -3.0, 3.0}}) {
    emit_sweep(ctx, c.stem, make_sweep(SweepAxis::ParamP, p_grid(c.lo, c.hi, pts), c.q, {0.5}, n, ctx.tail(n)),
               "FOLM BD vs p, q=" + format_double(c.q));
  }
}

void fig5(ReproContext& ctx) {
  const std::size_t n = ctx.n_max(2500);
  const std::size_t pts = ctx.points(kGridPoints);
  const std::size_t tail = ctx.tail(n);

  // Integer-order map: classic recursion, not the fractional scheme.
  SweepConfig iolm = make_sweep(SweepAxis::ParamP, p_grid(2.8, 4.0, pts), 1.0, {0.5, 0.9, 0.1}, n, tail);
  BifurcationDiagram diagram{iolm, {}};
  for (double x0 : iolm.initial_conditions) {
    BifurcativeSet set{x0, {}};
    for (double p : iolm.grid) {
      const Orbit orbit = solve_iolm(p, x0, n);
      GridPoint point{p, orbit.diverged, orbit.divergence_index, {}};
      if (!orbit.diverged) {
        const auto t = orbit.tail(tail);
        point.tail.assign(t.begin(), t.end());
      }
      set.points.push_back(std::move(point));
    }
    diagram.sets.push_back(std::move(set));
  }
  Meta meta = diagram_meta(iolm);
  meta.insert(meta.begin(), {{"figure", "fig5"}, {"scheme", "iolm"}});
  ctx.files.add("fig5_iolm.csv", diagram_csv(diagram, meta));
  ctx.files.add("fig5_iolm_plot.csv", diagram_plot_csv(diagram, meta));
  ctx.files.add_json("fig5_iolm_plot.json",
                     plot_description("fig5_iolm_plot.csv", "grid_value", "x", "p", "IOLM, three BSs", true));
  emit_comparison(ctx, "fig5_iolm", diagram);

  const auto folm = emit_sweep(
      ctx, "fig5_q1", make_sweep(SweepAxis::ParamP, p_grid(1.3, 2.5, pts), 1.0, {1.01, 0.5, 0.1}, n, tail),
      "FOLM q=1, three BSs");
  emit_comparison(ctx, "fig5_q1", folm);
}

void three_bs(ReproContext& ctx, const std::string& prefix, std::size_t n, bool with_p_axis) {
  const std::size_t pts = ctx.points(kGridPoints);
  const std::size_t tail = ctx.tail(n);
  const std::vector<double> x0{1.01, 0.5, 0.1};
  if (with_p_axis) {
    const auto p = emit_sweep(ctx, prefix + "_p", make_sweep(SweepAxis::ParamP, p_grid(1.3, 2.5, pts), 0.5, x0, n, tail),
                              "BD vs p, q=0.5, n_max=" + std::to_string(n));
    emit_comparison(ctx, prefix + "_p", p);
  }
  const auto q = emit_sweep(ctx, prefix + "_q", make_sweep(SweepAxis::OrderQ, q_grid(pts), 2.4, x0, n, tail),
                            "BD vs q, p=2.4, n_max=" + std::to_string(n));
  emit_comparison(ctx, prefix + "_q", q);
}

void fig6(ReproContext& ctx) { three_bs(ctx, "fig6", ctx.n_max(2500), true); }

void fig7(ReproContext& ctx) { three_bs(ctx, "fig7", ctx.n_max(7500), false); }

void fig8(ReproContext& ctx) {
  const std::size_t n = ctx.n_max(2500);
  const std::size_t pts = ctx.points(kGridPoints);
  const std::size_t tail = ctx.tail(n);
  const std::vector<double> x0{0.1, 0.5, 0.95, 0.7, 0.85};
  const auto q = emit_sweep(ctx, "fig8_q", make_sweep(SweepAxis::OrderQ, q_grid(pts), 2.2, x0, n, tail),
                            "BD vs q, p=2.2, five BSs");
  emit_comparison(ctx, "fig8_q", q);
  const auto p = emit_sweep(ctx, "fig8_p", make_sweep(SweepAxis::ParamP, p_grid(1.3, 2.5, pts), 0.3, x0, n, tail),
                            "BD vs p, q=0.3, five BSs");
  emit_comparison(ctx, "fig8_p", p);
}

void fig9(ReproContext& ctx) {
  const std::size_t n = ctx.n_max(2500);
  const std::size_t pts = ctx.points(kGridPoints);
  const auto d = emit_sweep(
      ctx, "fig9_puu",
      make_sweep(SweepAxis::OrderQ, q_grid(pts), 1.27, {0.2, 0.5, 0.1, 0.4}, n, ctx.tail(n), MapSpec::puu(1.27)),
      "Puu map BD vs q, a=1.27 (upper half)", true);
  emit_comparison(ctx, "fig9_puu", d);
}

}  // namespace

void run_repro(const RunConfig& config, OutputSet& out, std::ostream& log) {
  ReproContext ctx{config, out, log};
  const std::string& id = config.repro.figure;
  if (id == "fig1") return fig1(ctx);
  if (id == "fig2") return fig2(ctx);
  if (id == "fig3") return fig3(ctx);
  if (id == "fig4") return fig4(ctx);
  if (id == "fig5") return fig5(ctx);
  if (id == "fig6") return fig6(ctx);
  if (id == "fig7") return fig7(ctx);
  if (id == "fig8") return fig8(ctx);
  if (id == "fig9") return fig9(ctx);
  throw ConfigError("field 'repro.figure': unknown figure id '" + id + "'");
}

}  // namespace fracmap::app
