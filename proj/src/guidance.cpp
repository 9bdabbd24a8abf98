#include "pwlab/guidance.hpp"

#include <algorithm>
#include <cmath>

#include "pwlab/error.hpp"

namespace pwlab {

std::size_t EnsembleResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(errors.begin(), errors.end(), [](const auto& e) { return e.has_value(); }));
}

int step_count(double t0, double t1, double max_dt) {
  const double len = t1 - t0;
  if (len <= 0.0) return 0;
  return std::max(1, static_cast<int>(std::ceil(len / max_dt - 1e-9)));
}

double max_position_gap(const Trajectory& a, const Trajectory& b) {
  double gap = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.times.size() && j < b.times.size()) {
    const double ta = a.times[i], tb = b.times[j];
    const double tol = 1e-9 * std::max(1.0, std::abs(ta));
    if (std::abs(ta - tb) <= tol) {
      double d2 = 0.0;
      for (int k = 0; k < a.dim; ++k) {
        const double d = a.points[i][k] - b.points[j][k];
        d2 += d * d;
      }
      gap = std::max(gap, std::sqrt(d2));
      ++i;
      ++j;
    } else if (ta < tb) {
      ++i;
    } else {
      ++j;
    }
  }
  return gap;
}

TimeBracket bracket_time(std::span<const double> times, double t) {
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  if (times.empty() || t < times.front() - tol || t > times.back() + tol)
    throw Error(ErrorKind::OutOfSpan, "time " + std::to_string(t) + " is outside the record");
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times.begin());
  if (hi == times.size()) return {times.size() - 1, times.size() - 1, 0.0};
  const std::size_t lo = hi == 0 ? 0 : hi - 1;
  if (std::abs(t - times[lo]) <= tol) return {lo, lo, 0.0};
  if (std::abs(t - times[hi]) <= tol) return {hi, hi, 0.0};
  return {lo, hi, (t - times[lo]) / (times[hi] - times[lo])};
}

GuidanceField::GuidanceField(const EvolutionRecord& record, const ParticleModel& model,
                             double node_floor_rel, Execution exec) {
  record.validate();
  model.validate(record.grid().dim());
  grid_ = record.grid();
  const std::size_t n = record.snapshots.size();
  times_.resize(n);
  fields_.resize(n);
  std::vector<double> floors(n);
  for (std::size_t i = 0; i < n; ++i) {
    times_[i] = record.snapshots[i].time;
    floors[i] = node_floor_for(record.snapshots[i], node_floor_rel);
    if (!(floors[i] > 0.0))
      throw Error(ErrorKind::InvalidArgument, "snapshot has no mass to guide particles");
  }
  kernels::for_each_index(exec, n, [&](std::size_t i) {
    fields_[i] = phase_gradient(record.snapshots[i], model, floors[i],
                                GradientMethod::spectral, Execution::serial);
  });
}

Point GuidanceField::velocity(const Point& x, double t) const {
  const TimeBracket b = bracket_time(times_, t);
  try {
    const Point v0 = interpolate(fields_[b.lower], x);
    if (b.lower == b.upper) return v0;
    const Point v1 = interpolate(fields_[b.upper], x);
    Point v{};
    for (int a = 0; a < grid_.dim(); ++a) v[a] = (1.0 - b.weight) * v0[a] + b.weight * v1[a];
    return v;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NodeProximity) throw;
    throw Error(ErrorKind::NodeProximity, "trajectory reached a node region", t, x,
                grid_.dim());
  }
}

namespace {

// Accepts the box plus the half cell below lo that node-centred sampling
// cells reach into.
void check_start(const GridSpec& grid, const Point& x0) {
  for (int a = 0; a < grid.dim(); ++a)
    if (!std::isfinite(x0[a]) || x0[a] < grid.lo(a) - 0.5 * grid.spacing(a) ||
        x0[a] >= grid.hi(a))
      throw Error(ErrorKind::InvalidArgument, "start point lies outside the grid");
}

}  // namespace

Trajectory integrate_guidance(const GuidanceField& field, const Point& x0,
                              const IntegrationOptions& opts) {
  check_start(field.grid(), x0);
  if (!(opts.dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  const double t0 = opts.t_start.value_or(field.t_begin());
  const double t1 = opts.t_end.value_or(field.t_end());
  bracket_time(field.snapshot_times(), t0);
  bracket_time(field.snapshot_times(), t1);
  if (t1 < t0) throw Error(ErrorKind::InvalidArgument, "t_end precedes t_start");

  Trajectory traj;
  traj.dim = field.dim();
  traj.scheme = "guidance";
  const bool keep_all = !opts.endpoint_only;
  const bool keep_v = opts.store_velocities && keep_all;
  auto record_point = [&](double t, const Point& x) {
    traj.times.push_back(t);
    traj.points.push_back(x);
    if (keep_v) traj.velocities.push_back(field.velocity(x, t));
  };
  auto rhs = [&](double t, const Point& x) { return field.velocity(x, t); };

  Point x = x0;
  record_point(t0, x);
  march_intervals(field.snapshot_times(), t0, t1, opts.dt,
                  [&](double ts, double h, double te) {
                    x = rk4_step(x, ts, h, rhs);
                    for (int d = 0; d < traj.dim; ++d)
                      if (!std::isfinite(x[d]))
                        throw Error(ErrorKind::NonFinite, "trajectory became non-finite", te,
                                    x, traj.dim);
                    if (keep_all) record_point(te, x);
                  });
  if (!keep_all) record_point(t1, x);
  return traj;
}

Trajectory integrate_guidance(const EvolutionRecord& record, const ParticleModel& model,
                              const Point& x0, const IntegrationOptions& opts) {
  const GuidanceField field(record, model, opts.node_floor_rel);
  return integrate_guidance(field, x0, opts);
}

EnsembleResult integrate_ensemble(const GuidanceField& field, std::span<const Point> starts,
                                  const IntegrationOptions& opts, Execution exec) {
  EnsembleResult result;
  result.trajectories.resize(starts.size());
  result.errors.resize(starts.size());
  kernels::for_each_index(exec, starts.size(), [&](std::size_t i) {
    try {
      result.trajectories[i] = integrate_guidance(field, starts[i], opts);
    } catch (const Error& e) {
      result.errors[i] = e;
    } catch (const std::exception& e) {
      result.errors[i] = Error(ErrorKind::InvalidArgument, e.what());
    }
  });
  return result;
}

EnsembleResult integrate_ensemble(const EvolutionRecord& record, const ParticleModel& model,
                                  std::span<const Point> starts,
                                  const IntegrationOptions& opts, Execution exec) {
  const GuidanceField field(record, model, opts.node_floor_rel, exec);
  return integrate_ensemble(field, starts, opts, exec);
}

}  // namespace pwlab
