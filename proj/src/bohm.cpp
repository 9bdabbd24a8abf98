#include "pwlab/bohm.hpp"

#include <cmath>
#include <limits>

#include "pwlab/error.hpp"
#include "pwlab/spectral.hpp"

namespace pwlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Amplitude {
  std::vector<double> r;
  std::vector<std::uint8_t> valid;
  std::vector<Complex> spectrum;
};

Amplitude amplitude_of(const WaveFunction& psi, const Spectral& spectral, double node_floor,
                       Execution exec) {
  Amplitude out;
  const std::size_t n = psi.amplitudes.size();
  out.r.resize(n);
  out.valid.resize(n);
  std::vector<double> rho(n);
  kernels::modulus(exec, psi.amplitudes, out.r);
  kernels::modulus_squared(exec, psi.amplitudes, rho);
  kernels::floor_mask(exec, rho, node_floor, out.valid);
  out.spectrum.assign(out.r.begin(), out.r.end());
  spectral.forward(out.spectrum);
  return out;
}

std::vector<Complex> mixed(const Spectral& s, const Amplitude& amp, int axis_twice,
                           int axis_once) {
  std::array<int, kMaxDim> orders{};
  if (axis_twice >= 0) orders[axis_twice] += 2;
  if (axis_once >= 0) orders[axis_once] += 1;
  return s.mixed_derivative_from_spectrum(amp.spectrum, orders);
}

}  // namespace

QuantumPotentialField quantum_potential(const WaveFunction& psi, const ParticleModel& model,
                                        double node_floor, Execution exec) {
  psi.validate();
  model.validate(psi.grid.dim());
  if (!(node_floor > 0.0))
    throw Error(ErrorKind::InvalidArgument, "node_floor must be positive");
  const GridSpec& grid = psi.grid;
  Spectral spectral(grid);
  const Amplitude amp = amplitude_of(psi, spectral, node_floor, exec);

  QuantumPotentialField q;
  q.grid = grid;
  q.time = psi.time;
  q.valid = amp.valid;
  q.values.assign(grid.size(), 0.0);
  for (int a = 0; a < grid.dim(); ++a) {
    const auto lap = mixed(spectral, amp, a, -1);
    const double c = -1.0 / (2.0 * model.mass(a));
    for (std::size_t i = 0; i < grid.size(); ++i)
      q.values[i] += c * lap[i].real() / amp.r[i];
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!q.valid[i]) q.values[i] = kNaN;
  return q;
}

VectorField quantum_force(const WaveFunction& psi, const ParticleModel& model,
                          double node_floor, Execution exec) {
  psi.validate();
  model.validate(psi.grid.dim());
  if (!(node_floor > 0.0))
    throw Error(ErrorKind::InvalidArgument, "node_floor must be positive");
  const GridSpec& grid = psi.grid;
  const int d = grid.dim();
  Spectral spectral(grid);
  const Amplitude amp = amplitude_of(psi, spectral, node_floor, exec);

  std::array<std::vector<Complex>, kMaxDim> second, first;
  for (int a = 0; a < d; ++a) {
    second[a] = mixed(spectral, amp, a, -1);
    first[a] = mixed(spectral, amp, -1, a);
  }
  VectorField f;
  f.grid = grid;
  f.time = psi.time;
  f.valid = amp.valid;
  // -d_b Q = sum_a (1/2 m_a) (d_b d_a^2 R / R - d_a^2 R d_b R / R^2)
  for (int b = 0; b < d; ++b) {
    auto& out = f.components[b];
    out.assign(grid.size(), 0.0);
    for (int a = 0; a < d; ++a) {
      const auto third = mixed(spectral, amp, a, b);
      const double c = 1.0 / (2.0 * model.mass(a));
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = amp.r[i];
        out[i] += c * (third[i].real() / r - second[a][i].real() * first[b][i].real() / (r * r));
      }
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (!f.valid[i]) out[i] = kNaN;
  }
  return f;
}

BohmForceField::BohmForceField(const EvolutionRecord& record, const Potential& v,
                               const ParticleModel& model, double node_floor_rel,
                               Execution exec)
    : potential_(v), model_(model) {
  record.validate();
  grid_ = record.grid();
  model_.validate(grid_.dim());
  potential_.validate(grid_.dim());
  const std::size_t n = record.snapshots.size();
  times_.resize(n);
  forces_.resize(n);
  std::vector<double> floors(n);
  for (std::size_t i = 0; i < n; ++i) {
    times_[i] = record.snapshots[i].time;
    floors[i] = node_floor_for(record.snapshots[i], node_floor_rel);
    if (!(floors[i] > 0.0))
      throw Error(ErrorKind::InvalidArgument, "snapshot has no mass to guide particles");
  }
  kernels::for_each_index(exec, n, [&](std::size_t i) {
    forces_[i] = quantum_force(record.snapshots[i], model_, floors[i], Execution::serial);
  });
}

Point BohmForceField::acceleration(const Point& x, double t) const {
  const TimeBracket b = bracket_time(times_, t);
  Point fq{};
  try {
    const Point f0 = interpolate(forces_[b.lower], x);
    if (b.lower == b.upper) {
      fq = f0;
    } else {
      const Point f1 = interpolate(forces_[b.upper], x);
      for (int a = 0; a < grid_.dim(); ++a) fq[a] = (1.0 - b.weight) * f0[a] + b.weight * f1[a];
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NodeProximity) throw;
    throw Error(ErrorKind::NodeProximity, "trajectory reached a node region", t, x,
                grid_.dim());
  }
  const Point gv = potential_.gradient(x, grid_.dim(), t);
  Point acc{};
  for (int a = 0; a < grid_.dim(); ++a) acc[a] = (fq[a] - gv[a]) / model_.mass(a);
  return acc;
}

Trajectory integrate_second_order(const BohmForceField& field, const Point& x0,
                                  const Point& v0, const IntegrationOptions& opts) {
  const int d = field.dim();
  for (int a = 0; a < d; ++a)
    if (!std::isfinite(x0[a]) || !std::isfinite(v0[a]))
      throw Error(ErrorKind::InvalidArgument, "initial state must be finite");
  if (!(opts.dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  const double t0 = opts.t_start.value_or(field.t_begin());
  const double t1 = opts.t_end.value_or(field.t_end());
  if (t0 < field.t_begin() - 1e-12 || t1 > field.t_end() + 1e-12 || t1 < t0)
    throw Error(ErrorKind::OutOfSpan, "requested interval is outside the record");

  using State = std::array<double, 2 * kMaxDim>;
  auto rhs = [&](double t, const State& y) {
    Point x{};
    for (int a = 0; a < d; ++a) x[a] = y[a];
    const Point acc = field.acceleration(x, t);
    State dy{};
    for (int a = 0; a < d; ++a) {
      dy[a] = y[kMaxDim + a];
      dy[kMaxDim + a] = acc[a];
    }
    return dy;
  };
  auto split = [&](const State& y, Point& x, Point& v) {
    x = Point{};
    v = Point{};
    for (int a = 0; a < d; ++a) {
      x[a] = y[a];
      v[a] = y[kMaxDim + a];
    }
  };

  Trajectory traj;
  traj.dim = d;
  traj.scheme = "second-order";
  State y{};
  for (int a = 0; a < d; ++a) {
    y[a] = x0[a];
    y[kMaxDim + a] = v0[a];
  }
  auto push = [&](double t) {
    Point x, v;
    split(y, x, v);
    traj.times.push_back(t);
    traj.points.push_back(x);
    traj.velocities.push_back(v);
  };
  push(t0);
  // The force history is sampled at the record's snapshots; reuse them as
  // step boundaries.
  march_intervals(field.snapshot_times(), t0, t1, opts.dt,
                  [&](double ts, double h, double te) {
                    y = rk4_step(y, ts, h, rhs);
                    for (int a = 0; a < 2 * kMaxDim; ++a)
                      if (!std::isfinite(y[a]))
                        throw Error(ErrorKind::NonFinite, "trajectory became non-finite");
                    if (!opts.endpoint_only) push(te);
                  });
  if (opts.endpoint_only) push(t1);
  return traj;
}

Trajectory integrate_second_order(const EvolutionRecord& record, const Potential& v,
                                  const ParticleModel& model, const Point& x0,
                                  const Point& v0, const IntegrationOptions& opts) {
  const BohmForceField field(record, v, model, opts.node_floor_rel);
  return integrate_second_order(field, x0, v0, opts);
}

EquivalenceResult compare_first_second_order(const EvolutionRecord& record,
                                             const ParticleModel& model, const Point& x0,
                                             const Point& v0_offset,
                                             const IntegrationOptions& opts) {
  const GuidanceField guidance(record, model, opts.node_floor_rel);
  const BohmForceField bohm(record, record.potential, model, opts.node_floor_rel);
  const double t0 = opts.t_start.value_or(guidance.t_begin());

  EquivalenceResult r;
  r.x0 = x0;
  const Point vg = guidance.velocity(x0, t0);
  for (int a = 0; a < guidance.dim(); ++a) r.v0[a] = vg[a] + v0_offset[a];
  r.first_order = integrate_guidance(guidance, x0, opts);
  r.second_order = integrate_second_order(bohm, x0, r.v0, opts);
  r.position_gap = max_position_gap(r.first_order, r.second_order);
  try {
    for (std::size_t i = 0; i < r.second_order.points.size(); ++i) {
      const Point v = guidance.velocity(r.second_order.points[i], r.second_order.times[i]);
      double d2 = 0.0;
      for (int a = 0; a < guidance.dim(); ++a) {
        const double dv = r.second_order.velocities[i][a] - v[a];
        d2 += dv * dv;
      }
      r.velocity_constraint_gap = std::max(r.velocity_constraint_gap, std::sqrt(d2));
    }
  } catch (const Error&) {
    r.velocity_constraint_gap = std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace pwlab
