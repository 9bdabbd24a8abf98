#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "internal.hpp"
#include "pwlab/bohm.hpp"
#include "pwlab/classical.hpp"
#include "pwlab/equivariance.hpp"
#include "pwlab/error.hpp"
#include "pwlab/frames.hpp"
#include "pwlab/io.hpp"
#include "pwlab/svg.hpp"

namespace pwlab::cli::detail {

namespace fs = std::filesystem;

namespace {

constexpr int kMaxHeatmapCells = 256;

Point point_of(const json& j) {
  Point p{};
  for (std::size_t a = 0; a < j.size(); ++a) p[a] = j[a].get<double>();
  return p;
}

json error_json(const Error& e) {
  json j{{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (e.time()) j["time"] = *e.time();
  if (e.location()) j["location"] = io::point_json(*e.location(), e.dim());
  return j;
}

struct Context {
  const json& config;
  fs::path dir;
  GridSpec grid;
  ParticleModel model;
  Potential potential;
  WaveFunction psi0;
  IntegrationOptions integration;

  io::Encoding encoding() const {
    return config["output"]["encoding"] == "binary" ? io::Encoding::binary : io::Encoding::csv;
  }
  bool plots() const { return config["output"]["plots"].get<bool>(); }
  double tol(const char* key) const { return config["tolerances"][key].get<double>(); }
  std::uint64_t seed() const { return config["seed"].get<std::uint64_t>(); }

  svg::PlotOptions plot(const std::string& title, const std::string& x, const std::string& y) const {
    svg::PlotOptions o;
    o.title = title;
    o.x_label = x;
    o.y_label = y;
    if (config["output"]["svg_timestamp"].get<bool>()) {
      const std::time_t now = std::time(nullptr);
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      o.stamp = std::string("generated ") + buf;
    }
    return o;
  }
  void save_plot(const std::string& name, const std::string& doc) const {
    svg::write((dir / name).string(), doc);
  }

  EvolutionRecord evolve_record() const {
    const auto& e = config["evolution"];
    return evolve(psi0, potential, model, psi0.time + e["t_final"].get<double>(),
                  e["dt"].get<double>(), e["snapshot_stride"].get<int>());
  }
};

// Coarsened row-major table for heatmaps; rows and columns are averaged in
// blocks so plots stay small.
std::vector<double> coarsen(const std::vector<double>& values, int rows, int cols,
                            int& out_rows, int& out_cols) {
  const int fr = std::max(1, (rows + kMaxHeatmapCells - 1) / kMaxHeatmapCells);
  const int fc = std::max(1, (cols + kMaxHeatmapCells - 1) / kMaxHeatmapCells);
  out_rows = rows / fr;
  out_cols = cols / fc;
  std::vector<double> out(static_cast<std::size_t>(out_rows) * out_cols, 0.0);
  for (int r = 0; r < out_rows * fr; ++r)
    for (int c = 0; c < out_cols * fc; ++c)
      out[static_cast<std::size_t>(r / fr) * out_cols + c / fc] +=
          values[static_cast<std::size_t>(r) * cols + c] / (fr * fc);
  return out;
}

void density_heatmap(const Context& ctx, const std::string& name, const EvolutionRecord& record) {
  const GridSpec& g = record.grid();
  std::vector<double> table;
  int rows = 0, cols = 0;
  double y_lo = 0.0, y_hi = 0.0;
  std::string y_label;
  if (g.dim() == 1) {
    rows = static_cast<int>(record.snapshots.size());
    cols = g.points(0);
    for (const auto& s : record.snapshots) {
      const auto rho = density(s);
      table.insert(table.end(), rho.values.begin(), rho.values.end());
    }
    y_lo = record.t_begin();
    y_hi = record.t_end();
    y_label = "t";
  } else {
    // Final density; for 3D the middle slice along the last axis.
    const auto rho = density(record.snapshots.back());
    rows = g.points(0);
    cols = g.points(1);
    const int depth = g.dim() == 3 ? g.points(2) : 1;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        table.push_back(rho.values[(static_cast<std::size_t>(i) * cols + j) * depth + depth / 2]);
    // Transpose so x0 runs horizontally.
    std::vector<double> t(table.size());
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t[static_cast<std::size_t>(j) * rows + i] = table[static_cast<std::size_t>(i) * cols + j];
    table.swap(t);
    std::swap(rows, cols);
    y_lo = g.lo(1);
    y_hi = g.hi(1);
    y_label = "x1";
  }
  int r2 = 0, c2 = 0;
  const auto small = coarsen(table, rows, cols, r2, c2);
  ctx.save_plot(name, svg::heatmap(small, r2, c2, g.lo(0), g.hi(0), y_lo, y_hi,
                                   ctx.plot("density", "x0", y_label)));
}

void trajectory_plot(const Context& ctx, const std::string& name,
                     const std::vector<Trajectory>& trajectories, const std::string& title) {
  std::vector<svg::Series> series;
  for (std::size_t i = 0; i < trajectories.size() && i < 40; ++i) {
    svg::Series s;
    s.x = trajectories[i].times;
    for (const auto& p : trajectories[i].points) s.y.push_back(p[0]);
    series.push_back(std::move(s));
  }
  ctx.save_plot(name, svg::line_plot(series, ctx.plot(title, "t", "x0")));
}

json failures_json(const EnsembleResult& r) {
  json out = json::array();
  for (std::size_t i = 0; i < r.errors.size(); ++i)
    if (r.errors[i]) {
      json e = error_json(*r.errors[i]);
      e["start"] = i;
      out.push_back(e);
    }
  return out;
}

std::vector<Trajectory> successes(const EnsembleResult& r) {
  std::vector<Trajectory> out;
  for (const auto& t : r.trajectories)
    if (t) out.push_back(*t);
  return out;
}

json check(double value, double limit, bool upper = true) {
  return {{"value", value}, {"limit", limit}, {"kind", upper ? "max" : "min"},
          {"pass", upper ? value <= limit : value >= limit}};
}

CommandOutcome finish(json checks, json results) {
  bool pass = true;
  for (auto it = checks.begin(); it != checks.end(); ++it) pass = pass && it.value()["pass"].get<bool>();
  results["checks"] = std::move(checks);
  return {std::move(results), pass};
}

CommandOutcome cmd_evolve(const Context& ctx) {
  const auto record = ctx.evolve_record();
  if (ctx.config["output"]["snapshots"].get<bool>())
    io::write_evolution(ctx.dir / "snapshots", record, ctx.encoding());

  std::ofstream csv(ctx.dir / "observables.csv");
  csv << "time,norm,energy";
  for (int a = 0; a < ctx.grid.dim(); ++a) csv << ",mean_x" << a << ",var_x" << a;
  csv << '\n';
  const double n0 = record.snapshots.front().norm_squared();
  const double e0 = energy(record.snapshots.front(), ctx.potential, ctx.model);
  double norm_drift = 0.0, energy_drift = 0.0;
  svg::Series mean{"<x0>", {}, {}};
  for (const auto& s : record.snapshots) {
    const double n = s.norm_squared();
    const double e = energy(s, ctx.potential, ctx.model);
    norm_drift = std::max(norm_drift, std::abs(n - n0));
    energy_drift = std::max(energy_drift, std::abs(e - e0));
    csv << io::format_double(s.time) << ',' << io::format_double(n) << ',' << io::format_double(e);
    for (int a = 0; a < ctx.grid.dim(); ++a)
      csv << ',' << io::format_double(density_mean(s, a)) << ','
          << io::format_double(density_variance(s, a));
    csv << '\n';
    mean.x.push_back(s.time);
    mean.y.push_back(density_mean(s, 0));
  }
  json checks{{"norm_drift", check(norm_drift, ctx.tol("norm_drift"))}};
  json results{{"snapshots", record.snapshots.size()},
               {"t_final", record.t_end()},
               {"norm_drift", norm_drift},
               {"energy_drift", energy_drift},
               {"energy_initial", e0}};
  const auto& st = ctx.config["state"];
  if (st["type"] == "gaussian" && ctx.potential.is_free()) {
    const auto exact = analytic_free_gaussian(ctx.grid, point_of(st["center"]),
                                              point_of(st["momentum"]), point_of(st["sigma"]),
                                              ctx.model, record.t_end() - ctx.psi0.time);
    const double err = max_abs_difference(record.snapshots.back(), exact);
    results["analytic_error"] = err;
    checks["analytic_error"] = check(err, ctx.tol("analytic_error"));
  }
  if (ctx.plots()) {
    density_heatmap(ctx, "density.svg", record);
    ctx.save_plot("mean.svg", svg::line_plot({mean}, ctx.plot("position mean", "t", "<x0>")));
  }
  return finish(checks, results);
}

CommandOutcome cmd_trajectories(const Context& ctx) {
  const auto record = ctx.evolve_record();
  const auto starts = starts_of(ctx.config, ctx.psi0);
  const auto result = integrate_ensemble(record, ctx.model, starts, ctx.integration);
  const auto ok = successes(result);
  io::write_trajectories_csv(ctx.dir / "trajectories.csv", ok);
  io::write_trajectory_sidecar(ctx.dir / "trajectories.json", ctx.grid, ctx.model,
                               "guidance-rk4", ctx.config["integration"]);
  json finals = json::array();
  for (const auto& t : result.trajectories)
    finals.push_back(t ? io::point_json(t->points.back(), ctx.grid.dim()) : json());
  if (ctx.plots()) trajectory_plot(ctx, "trajectories.svg", ok, "guidance trajectories");
  return finish(
      {{"failures", check(static_cast<double>(result.failures()),
                          ctx.config["tolerances"]["max_failures"].get<double>())}},
      {{"starts", starts.size()},
       {"failures", failures_json(result)},
       {"final_points", finals}});
}

CommandOutcome cmd_second_order(const Context& ctx) {
  const auto record = ctx.evolve_record();
  const auto starts = starts_of(ctx.config, ctx.psi0);
  const GuidanceField guidance(record, ctx.model, ctx.integration.node_floor_rel);
  const BohmForceField force(record, ctx.potential, ctx.model, ctx.integration.node_floor_rel);
  const auto& fixed_v0 = ctx.config["second_order"]["v0"];
  std::vector<Trajectory> ok;
  json failures = json::array();
  json initial = json::array();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    try {
      const Point v0 =
          fixed_v0.is_null() ? guidance.velocity(starts[i], record.t_begin()) : point_of(fixed_v0);
      initial.push_back(io::point_json(v0, ctx.grid.dim()));
      ok.push_back(integrate_second_order(force, starts[i], v0, ctx.integration));
    } catch (const Error& e) {
      json j = error_json(e);
      j["start"] = i;
      failures.push_back(j);
    }
  }
  io::write_trajectories_csv(ctx.dir / "trajectories.csv", ok);
  io::write_trajectory_sidecar(ctx.dir / "trajectories.json", ctx.grid, ctx.model,
                               "second-order", ctx.config["integration"]);
  if (ctx.plots()) trajectory_plot(ctx, "trajectories.svg", ok, "second-order trajectories");
  return finish({{"failures", check(static_cast<double>(failures.size()),
                                    ctx.config["tolerances"]["max_failures"].get<double>())}},
                {{"starts", starts.size()}, {"initial_velocities", initial}, {"failures", failures}});
}

CommandOutcome cmd_boost(const Context& ctx) {
  const Point v = point_of(ctx.config["boost"]["velocity"]);
  const auto starts = starts_of(ctx.config, ctx.psi0);
  const auto& e = ctx.config["evolution"];
  BoostAuditOptions opts;
  opts.dt = e["dt"].get<double>();
  opts.snapshot_stride = e["snapshot_stride"].get<int>();
  opts.integration = ctx.integration;
  const auto report = boost_covariance_audit(ctx.psi0, ctx.potential, ctx.model, v, starts,
                                             ctx.psi0.time + e["t_final"].get<double>(), opts);
  const auto final_state = ctx.evolve_record().snapshots.back();
  const double shift = std::max(
      check_phase_gradient_shift(ctx.psi0, ctx.model, v, ctx.integration.node_floor_rel),
      check_phase_gradient_shift(final_state, ctx.model, v, ctx.integration.node_floor_rel));
  io::write_trajectories_csv(ctx.dir / "unprimed.csv", report.unprimed);
  io::write_trajectories_csv(ctx.dir / "primed.csv", report.primed);
  std::ofstream gaps(ctx.dir / "gaps.csv");
  gaps << "start,gap\n";
  for (std::size_t i = 0; i < report.gaps.size(); ++i)
    gaps << i << ',' << io::format_double(report.gaps[i]) << '\n';
  if (ctx.plots()) {
    std::vector<svg::Series> series;
    for (std::size_t i = 0; i < report.unprimed.size() && i < 10; ++i) {
      svg::Series mapped{i == 0 ? "X - vt" : "", report.unprimed[i].times, {}};
      for (std::size_t k = 0; k < mapped.x.size(); ++k)
        mapped.y.push_back(report.unprimed[i].points[k][0] - v[0] * (mapped.x[k] - ctx.psi0.time));
      svg::Series primed{i == 0 ? "X'" : "", report.primed[i].times, {}};
      for (const auto& p : report.primed[i].points) primed.y.push_back(p[0]);
      series.push_back(std::move(mapped));
      series.push_back(std::move(primed));
    }
    ctx.save_plot("boost.svg", svg::line_plot(series, ctx.plot("boost covariance", "t", "x0")));
  }
  json results = to_json(report);
  results["phase_gradient_shift"] = shift;
  return finish({{"max_gap", check(report.max_gap, ctx.tol("boost_gap"))},
                 {"phase_gradient_shift", check(shift, ctx.tol("phase_shift"))}},
                results);
}

Matrix rotation_of(const json& angles, int dim) {
  static const int planes[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  Matrix r = identity_matrix();
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const Matrix f = plane_rotation(planes[k][0], planes[k][1], angles[k].get<double>());
    Matrix next{};
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int l = 0; l < dim; ++l) next[i][j] += f[i][l] * r[l][j];
    r = next;
  }
  return r;
}

CommandOutcome cmd_frame(const Context& ctx) {
  const Matrix r = rotation_of(ctx.config["frame"]["angles"], ctx.grid.dim());
  const Point a = point_of(ctx.config["frame"]["translation"]);
  const auto& e = ctx.config["evolution"];
  const double t1 = ctx.psi0.time + e["t_final"].get<double>();
  const double dt = e["dt"].get<double>();
  const int stride = e["snapshot_stride"].get<int>();

  const auto evolved = ctx.evolve_record();
  const auto then_transform = euclidean_transform_wavefunction(evolved.snapshots.back(), r, a);
  const auto transformed = euclidean_transform_wavefunction(ctx.psi0, r, a);
  const auto other = evolve(transformed, ctx.potential, ctx.model, t1, dt, stride);
  const auto& transform_then_evolve = other.snapshots.back();
  const double gap = max_abs_difference(then_transform, transform_then_evolve);

  DensityField diff = density(then_transform);
  for (std::size_t i = 0; i < diff.values.size(); ++i)
    diff.values[i] = std::abs(then_transform.value(i) - transform_then_evolve.value(i));
  diff.probability = false;
  io::write_snapshot(ctx.dir, "difference", diff, ctx.encoding());
  if (ctx.plots()) {
    density_heatmap(ctx, "evolve_then_transform.svg",
                    EvolutionRecord{{then_transform}, dt, kStrangScheme, ctx.potential, ctx.model});
    density_heatmap(ctx, "transform_then_evolve.svg", other);
  }
  return finish({{"gap", check(gap, ctx.tol("frame_gap"))}},
                {{"gap", gap},
                 {"potential_distance_only", ctx.potential.distance_only()},
                 {"t_final", t1}});
}

CommandOutcome cmd_accel(const Context& ctx) {
  const auto& ac = ctx.config["accel"];
  const Point a = point_of(ac["acceleration"]);
  const Point x0 = point_of(ac["x0"]), v0 = point_of(ac["v0"]);
  const double t1 = ac["t_final"].get<double>(), dt = ac["dt"].get<double>();
  const int d = ctx.grid.dim();
  for (const auto& term : ctx.potential.terms())
    if (std::holds_alternative<HarmonicTerm>(term) ||
        std::holds_alternative<GaussianBarrierTerm>(term) ||
        std::holds_alternative<TableTerm>(term))
      throw Error(ErrorKind::InvalidArgument,
                  "accel-audit trajectories need a potential whose force is uniform in space");

  double traj_gap = 0.0, force_gap = 0.0;
  std::vector<Trajectory> mapped_all, primed_all;
  json per_set = json::array();
  for (const auto& set : ac["mass_sets"]) {
    ParticleModel m{set.get<std::vector<double>>(), {}};
    const Potential vp = accelerated_frame_potential(ctx.potential, m, a);
    const auto un = integrate_newton(ctx.potential, m, x0, v0, t1, dt);
    const auto pr = integrate_newton(vp, m, x0, v0, t1, dt);
    Trajectory mapped = un;
    double set_traj = 0.0, set_force = 0.0;
    for (std::size_t k = 0; k < un.times.size(); ++k) {
      const double t = un.times[k];
      for (int i = 0; i < d; ++i) {
        mapped.points[k][i] = un.points[k][i] - 0.5 * a[i] * t * t;
        mapped.velocities[k][i] = un.velocities[k][i] - a[i] * t;
        set_traj = std::max(set_traj, std::abs(mapped.points[k][i] - pr.points[k][i]));
      }
      const Point f = fictitious_acceleration(ctx.potential, vp, m, pr.points[k], t);
      for (int i = 0; i < d; ++i) set_force = std::max(set_force, std::abs(f[i] + a[i]));
    }
    traj_gap = std::max(traj_gap, set_traj);
    force_gap = std::max(force_gap, set_force);
    per_set.push_back({{"masses", set}, {"trajectory_gap", set_traj}, {"force_gap", set_force},
                       {"notes", vp.notes()}});
    mapped_all.push_back(std::move(mapped));
    primed_all.push_back(pr);
  }
  io::write_trajectories_csv(ctx.dir / "mapped_unprimed.csv", mapped_all);
  io::write_trajectories_csv(ctx.dir / "primed.csv", primed_all);
  if (ctx.plots()) trajectory_plot(ctx, "primed.svg", primed_all, "accelerated frame");
  return finish({{"trajectory_gap", check(traj_gap, ctx.tol("accel_trajectory_gap"))},
                 {"force_gap", check(force_gap, ctx.tol("accel_force_gap"))}},
                {{"acceleration", io::point_json(a, d)}, {"mass_sets", per_set}});
}

CommandOutcome cmd_equivalence(const Context& ctx) {
  const auto record = ctx.evolve_record();
  const auto starts = starts_of(ctx.config, ctx.psi0);
  const Point offset = point_of(ctx.config["equivalence"]["v0_offset"]);
  const auto& offset_check = ctx.config["equivalence"]["offset_check"];
  const int d = ctx.grid.dim();
  double worst = 0.0, worst_constraint = 0.0, weakest_offset = INFINITY;
  json rows = json::array();
  std::vector<Trajectory> first, second;
  for (const auto& x0 : starts) {
    const auto r = compare_first_second_order(record, ctx.model, x0, offset, ctx.integration);
    worst = std::max(worst, r.position_gap);
    worst_constraint = std::max(worst_constraint, r.velocity_constraint_gap);
    json row{{"x0", io::point_json(x0, d)},
             {"v0", io::point_json(r.v0, d)},
             {"position_gap", r.position_gap},
             {"velocity_constraint_gap", r.velocity_constraint_gap}};
    if (!offset_check.is_null()) {
      Point kick = offset;
      kick[0] += offset_check.get<double>();
      const auto o = compare_first_second_order(record, ctx.model, x0, kick, ctx.integration);
      weakest_offset = std::min(weakest_offset, o.position_gap);
      row["offset_position_gap"] = o.position_gap;
    }
    rows.push_back(row);
    first.push_back(r.first_order);
    second.push_back(r.second_order);
  }
  io::write_trajectories_csv(ctx.dir / "first_order.csv", first);
  io::write_trajectories_csv(ctx.dir / "second_order.csv", second);
  if (ctx.plots()) {
    std::vector<svg::Series> gaps;
    for (std::size_t i = 0; i < first.size() && i < 10; ++i) {
      svg::Series s{"", first[i].times, {}};
      const std::size_t n = std::min(first[i].points.size(), second[i].points.size());
      s.x.resize(n);
      for (std::size_t k = 0; k < n; ++k)
        s.y.push_back(std::abs(first[i].points[k][0] - second[i].points[k][0]));
      gaps.push_back(std::move(s));
    }
    ctx.save_plot("gap.svg", svg::line_plot(gaps, ctx.plot("first vs second order", "t", "|gap|")));
  }
  json checks{{"position_gap", check(worst, ctx.tol("equivalence_gap"))}};
  if (!offset_check.is_null())
    checks["offset_position_gap"] = check(weakest_offset, ctx.tol("offset_gap_min"), false);
  return finish(checks, {{"starts", rows},
                         {"max_position_gap", worst},
                         {"max_velocity_constraint_gap", worst_constraint}});
}

CommandOutcome cmd_continuity(const Context& ctx) {
  const auto record = ctx.evolve_record();
  const std::size_t n = record.snapshots.size();
  if (n < 3)
    throw Error(ErrorKind::OutOfSpan, "continuity needs at least three snapshots");
  const auto& ti = ctx.config["continuity"]["t_index"];
  const std::size_t index = ti.is_null() ? n / 2 : ti.get<std::size_t>();
  const double rel = ctx.integration.node_floor_rel;
  const double residual = continuity_residual(record, ctx.model, index, rel);

  std::ofstream csv(ctx.dir / "residual.csv");
  csv << "index,time,residual\n";
  svg::Series curve{"residual", {}, {}};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = continuity_residual(record, ctx.model, i, rel);
    csv << i << ',' << io::format_double(record.snapshots[i].time) << ',' << io::format_double(r)
        << '\n';
    curve.x.push_back(record.snapshots[i].time);
    curve.y.push_back(r);
  }
  if (ctx.plots())
    ctx.save_plot("residual.svg", svg::line_plot({curve}, ctx.plot("continuity residual", "t", "L2")));
  json checks{{"residual", check(residual, ctx.tol("continuity_residual"))}};
  json results{{"t_index", index}, {"time", record.snapshots.at(index).time}, {"residual", residual}};
  const auto& scale = ctx.config["continuity"]["compare_mass_scale"];
  if (!scale.is_null()) {
    const double wrong =
        continuity_residual(record, ctx.model.scaled(scale.get<double>()), index, rel);
    results["wrong_mass_residual"] = wrong;
    results["wrong_mass_ratio"] = wrong / residual;
    checks["wrong_mass_ratio"] =
        check(wrong / residual, ctx.tol("continuity_mass_ratio_min"), false);
  }
  return finish(checks, results);
}

CommandOutcome cmd_ensemble(const Context& ctx) {
  const auto record = ctx.evolve_record();
  const auto& en = ctx.config["ensemble"];
  const auto ens0 = equilibrium_ensemble(
      ctx.psi0, en["n"].get<std::size_t>(), ctx.seed(),
      en["scheme"] == "iid" ? SamplingScheme::iid : SamplingScheme::stratified);
  const auto moved = transport_ensemble(record, ctx.model, ens0, ctx.integration);
  const auto final_density = density(record.snapshots.back());
  const auto per_axis =
      ks_distance_per_axis(moved.state.points, moved.state.weights, final_density);
  const double ks = *std::max_element(per_axis.begin(), per_axis.end());
  io::write_points_csv(ctx.dir / "initial.csv", ens0.points, ens0.weights, ctx.grid.dim());
  io::write_points_csv(ctx.dir / "final.csv", moved.state.points, moved.state.weights,
                       ctx.grid.dim());
  if (ctx.plots()) {
    // Empirical versus grid marginal CDF along axis 0.
    const GridSpec& g = record.grid();
    std::vector<double> marginal(g.points(0), 0.0);
    for (std::size_t i = 0; i < final_density.values.size(); ++i)
      marginal[g.unflatten(i)[0]] += final_density.values[i];
    svg::Series grid_cdf{"|psi|^2", {}, {}}, sample_cdf{"ensemble", {}, {}};
    double acc = 0.0, total = 0.0;
    for (double m : marginal) total += m;
    for (int j = 0; j < g.points(0); ++j) {
      acc += marginal[j];
      grid_cdf.x.push_back(g.coordinate(0, j) + 0.5 * g.spacing(0));
      grid_cdf.y.push_back(acc / total);
    }
    std::vector<double> xs;
    for (const auto& p : moved.state.points) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    const std::size_t step = std::max<std::size_t>(1, xs.size() / 400);
    for (std::size_t i = 0; i < xs.size(); i += step) {
      sample_cdf.x.push_back(xs[i]);
      sample_cdf.y.push_back(static_cast<double>(i + 1) / static_cast<double>(xs.size()));
    }
    ctx.save_plot("cdf.svg", svg::line_plot({grid_cdf, sample_cdf},
                                            ctx.plot("axis-0 marginal CDF", "x0", "CDF")));
  }
  json dropped = json::array();
  for (std::size_t i = 0; i < moved.dropped.size(); ++i) {
    json e = error_json(moved.dropped_errors[i]);
    e["index"] = moved.dropped[i];
    dropped.push_back(e);
  }
  return finish({{"ks", check(ks, ctx.tol("ks_max"))}},
                {{"n", ens0.points.size()},
                 {"ks_per_axis", per_axis},
                 {"ks", ks},
                 {"dropped", dropped},
                 {"dropped_weight", moved.dropped_weight}});
}

CommandOutcome cmd_mass(const Context& ctx) {
  const auto record = ctx.evolve_record();
  const auto& ma = ctx.config["mass_audit"];
  const auto r = coefficient_uniqueness_experiment(record, ctx.model, ma["mass_scale"].get<double>(),
                                                   ma["n"].get<std::size_t>(), ctx.seed(),
                                                   ctx.integration);
  std::ofstream csv(ctx.dir / "ks.csv");
  csv << "axis,ks_control,ks_wrong\n";
  for (std::size_t a = 0; a < r.ks_control_per_axis.size(); ++a)
    csv << a << ',' << io::format_double(r.ks_control_per_axis[a]) << ','
        << io::format_double(r.ks_wrong_per_axis[a]) << '\n';
  return finish({{"ks_control", check(r.ks_control, ctx.tol("ks_max"))},
                 {"ratio", check(r.ratio, ctx.tol("mass_ratio_min"), false)}},
                to_json(r));
}

}  // namespace

CommandOutcome execute(const std::string& command, const json& config, const fs::path& dir) {
  const GridSpec grid = grid_of(config);
  const ParticleModel model = model_of(config);
  const Potential potential = potential_of(config);
  IntegrationOptions integration;
  integration.dt = config["integration"]["dt"].get<double>();
  integration.node_floor_rel = config["integration"]["node_floor_rel"].get<double>();
  const Context ctx{config, dir, grid, model, potential, state_of(config, grid, model),
                    integration};

  if (command == "evolve") return cmd_evolve(ctx);
  if (command == "trajectories") return cmd_trajectories(ctx);
  if (command == "second-order") return cmd_second_order(ctx);
  if (command == "boost-audit") return cmd_boost(ctx);
  if (command == "frame-audit") return cmd_frame(ctx);
  if (command == "accel-audit") return cmd_accel(ctx);
  if (command == "equivalence-audit") return cmd_equivalence(ctx);
  if (command == "continuity-audit") return cmd_continuity(ctx);
  if (command == "ensemble") return cmd_ensemble(ctx);
  if (command == "mass-audit") return cmd_mass(ctx);
  throw Error(ErrorKind::ConfigInvalid, "unknown command '" + command + "'");
}

}  // namespace pwlab::cli::detail
