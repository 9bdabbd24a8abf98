#include "pwlab/schrodinger.hpp"

#include <cmath>
#include <numbers>

#include "pwlab/error.hpp"

namespace pwlab {

namespace {

// Continuum mass of a 1D Gaussian density N(center, width^2) outside [lo, hi).
double outside_mass(double center, double width, double lo, double hi) {
  const double s = width * std::numbers::sqrt2;
  return 0.5 * std::erfc((center - lo) / s) + 0.5 * std::erfc((hi - center) / s);
}

void check_containment(const GridSpec& grid, const Point& center, const Point& width) {
  double inside = 1.0;
  for (int a = 0; a < grid.dim(); ++a)
    inside *= 1.0 - outside_mass(center[a], width[a], grid.lo(a), grid.hi(a));
  if (1.0 - inside > 1e-6)
    throw Error(ErrorKind::PacketTruncated,
                "packet mass outside the box exceeds 1e-6 (" + std::to_string(1.0 - inside) +
                    ")");
}

void check_finite(const WaveFunction& psi) {
  for (const auto& z : psi.amplitudes)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::NonFinite,
                  "amplitude became non-finite at t = " + std::to_string(psi.time));
}

// Fills psi with a separable product of per-axis factors.
template <class AxisFn>
WaveFunction separable(const GridSpec& grid, double t, AxisFn&& axis_value) {
  const int d = grid.dim();
  std::array<std::vector<Complex>, kMaxDim> factor;
  for (int a = 0; a < d; ++a) {
    factor[a].resize(grid.points(a));
    for (int j = 0; j < grid.points(a); ++j) factor[a][j] = axis_value(a, grid.coordinate(a, j));
  }
  std::vector<Complex> amp(grid.size());
  for (std::size_t flat = 0; flat < amp.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    Complex z = factor[0][idx[0]];
    for (int a = 1; a < d; ++a) z *= factor[a][idx[a]];
    amp[flat] = z;
  }
  WaveFunction psi(grid, std::move(amp), t);
  psi.normalize();
  return psi;
}

}  // namespace

void EvolutionRecord::validate() const {
  if (snapshots.empty()) throw Error(ErrorKind::InvalidArgument, "record has no snapshots");
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    if (!(snapshots[i].time > snapshots[i - 1].time))
      throw Error(ErrorKind::InvalidArgument, "snapshot times must increase strictly");
    if (!(snapshots[i].grid == snapshots[0].grid))
      throw Error(ErrorKind::InvalidArgument, "snapshots must share one grid");
  }
}

SplitStepPropagator::SplitStepPropagator(const GridSpec& grid, Potential potential,
                                         ParticleModel model, double dt, Execution exec)
    : grid_(grid),
      potential_(std::move(potential)),
      model_(std::move(model)),
      dt_(dt),
      exec_(exec),
      spectral_(grid) {
  if (dt == 0.0 || !std::isfinite(dt))
    throw Error(ErrorKind::InvalidArgument, "dt must be finite and nonzero");
  model_.validate(grid.dim());
  potential_.validate(grid.dim());
  if (!potential_.is_free() && !potential_.time_dependent())
    static_potential_ = potential_.sample(grid_, 0.0);
}

void SplitStepPropagator::refresh_kinetic(const Point& twist) {
  if (kinetic_ready_ && twist == kinetic_twist_) return;
  const int d = grid_.dim();
  std::array<std::vector<double>, kMaxDim> energy;
  for (int a = 0; a < d; ++a) {
    energy[a].resize(grid_.points(a));
    for (int j = 0; j < grid_.points(a); ++j) {
      const double k = grid_.wavenumber(a, j) + twist[a];
      energy[a][j] = k * k / (2.0 * model_.mass(a));
    }
  }
  kinetic_.resize(grid_.size());
  for (std::size_t flat = 0; flat < kinetic_.size(); ++flat) {
    const auto idx = grid_.unflatten(flat);
    double e = 0.0;
    for (int a = 0; a < d; ++a) e += energy[a][idx[a]];
    kinetic_[flat] = std::polar(1.0, -e * dt_);
  }
  kinetic_twist_ = twist;
  kinetic_ready_ = true;
}

void SplitStepPropagator::step(WaveFunction& psi) {
  if (!(psi.grid == grid_))
    throw Error(ErrorKind::InvalidArgument, "wavefunction grid does not match propagator");
  const double h = 0.5 * dt_;
  const bool free = potential_.is_free();
  const bool varying = potential_.time_dependent();
  if (!free) {
    if (varying)
      kernels::potential_phase(exec_, psi.amplitudes, potential_.sample(grid_, psi.time), h);
    else
      kernels::potential_phase(exec_, psi.amplitudes, static_potential_, h);
  }
  refresh_kinetic(psi.twist);
  spectral_.forward(psi.amplitudes);
  kernels::multiply(exec_, psi.amplitudes, kinetic_);
  spectral_.inverse(psi.amplitudes);
  if (!free) {
    if (varying)
      kernels::potential_phase(exec_, psi.amplitudes,
                               potential_.sample(grid_, psi.time + dt_), h);
    else
      kernels::potential_phase(exec_, psi.amplitudes, static_potential_, h);
  }
  psi.time += dt_;
  check_finite(psi);
}

WaveFunction step_splitstep(const WaveFunction& psi, const Potential& v,
                            const ParticleModel& model, double dt) {
  psi.validate();
  SplitStepPropagator prop(psi.grid, v, model, dt);
  WaveFunction out = psi;
  prop.step(out);
  return out;
}

EvolutionRecord evolve(const WaveFunction& psi0, const Potential& v,
                       const ParticleModel& model, double t_final, double dt,
                       int snapshot_stride, Execution exec) {
  psi0.validate();
  if (snapshot_stride < 1)
    throw Error(ErrorKind::InvalidArgument, "snapshot_stride must be >= 1");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  const double span = t_final - psi0.time;
  const double tol = 1e-9 * std::max(1.0, std::abs(span));
  if (span < -tol)
    throw Error(ErrorKind::InvalidArgument, "t_final precedes the initial time");
  const auto steps = static_cast<long long>(std::llround(span / dt));
  if (std::abs(static_cast<double>(steps) * dt - span) > tol)
    throw Error(ErrorKind::InvalidArgument, "dt does not divide the evolution span");

  EvolutionRecord record;
  record.dt = dt;
  record.potential = v;
  record.model = model;
  record.snapshots.push_back(psi0);
  if (steps == 0) return record;

  SplitStepPropagator prop(psi0.grid, v, model, dt, exec);
  WaveFunction psi = psi0;
  const double t0 = psi0.time;
  for (long long k = 1; k <= steps; ++k) {
    prop.step(psi);
    psi.time = t0 + static_cast<double>(k) * dt;
    if (k % snapshot_stride == 0 || k == steps) record.snapshots.push_back(psi);
  }
  return record;
}

WaveFunction gaussian_packet(const GridSpec& grid, const Point& center,
                             const Point& momentum, const Point& sigma) {
  for (int a = 0; a < grid.dim(); ++a)
    if (!(sigma[a] > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
  check_containment(grid, center, sigma);
  return separable(grid, 0.0, [&](int a, double x) {
    const double dx = x - center[a];
    return std::polar(std::exp(-dx * dx / (4.0 * sigma[a] * sigma[a])), momentum[a] * x);
  });
}

double free_gaussian_width(double sigma0, double mass, double t) {
  const double r = t / (2.0 * mass * sigma0 * sigma0);
  return sigma0 * std::sqrt(1.0 + r * r);
}

WaveFunction analytic_free_gaussian(const GridSpec& grid, const Point& center,
                                    const Point& momentum, const Point& sigma0,
                                    const ParticleModel& model, double t) {
  model.validate(grid.dim());
  Point moved{}, width{};
  for (int a = 0; a < grid.dim(); ++a) {
    if (!(sigma0[a] > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
    moved[a] = center[a] + momentum[a] / model.mass(a) * t;
    width[a] = free_gaussian_width(sigma0[a], model.mass(a), t);
  }
  check_containment(grid, moved, width);
  return separable(grid, t, [&](int a, double x) {
    const double m = model.mass(a);
    const double s2 = sigma0[a] * sigma0[a];
    const Complex spread(1.0, t / (2.0 * m * s2));
    const double dx = x - moved[a];
    const Complex arg = -dx * dx / (4.0 * s2 * spread) +
                        Complex(0.0, momentum[a] * x - momentum[a] * momentum[a] * t / (2.0 * m));
    return std::exp(arg) / std::sqrt(spread);
  });
}

WaveFunction plane_wave(const GridSpec& grid, const Point& momentum) {
  Point grid_k{};
  for (int a = 0; a < grid.dim(); ++a) {
    const double unit = 2.0 * std::numbers::pi / grid.length(a);
    grid_k[a] = std::round(momentum[a] / unit) * unit;
  }
  WaveFunction psi = separable(grid, 0.0, [&](int a, double x) {
    return std::polar(1.0, grid_k[a] * x);
  });
  for (int a = 0; a < grid.dim(); ++a) psi.twist[a] = momentum[a] - grid_k[a];
  return psi;
}

double harmonic_ground_energy(std::span<const double> k, const ParticleModel& model) {
  double e = 0.0;
  for (int a = 0; a < model.dim(); ++a) e += 0.5 * std::sqrt(k[a] / model.mass(a));
  return e;
}

WaveFunction harmonic_ground_state(const GridSpec& grid, std::span<const double> k,
                                   const ParticleModel& model) {
  Point zero{};
  return harmonic_coherent_state(grid, k, model, zero, 0.0);
}

WaveFunction harmonic_coherent_state(const GridSpec& grid, std::span<const double> k,
                                     const ParticleModel& model, const Point& displacement,
                                     double t) {
  model.validate(grid.dim());
  if (static_cast<int>(k.size()) != grid.dim())
    throw Error(ErrorKind::InvalidArgument, "harmonic k needs one entry per axis");
  Point center{}, width{};
  for (int a = 0; a < grid.dim(); ++a) {
    if (!(k[a] > 0.0)) throw Error(ErrorKind::InvalidArgument, "harmonic k must be positive");
    const double w = std::sqrt(k[a] / model.mass(a));
    center[a] = displacement[a] * std::cos(w * t);
    width[a] = std::sqrt(1.0 / (2.0 * model.mass(a) * w));
  }
  check_containment(grid, center, width);
  return separable(grid, t, [&](int a, double x) {
    const double m = model.mass(a);
    const double w = std::sqrt(k[a] / m);
    const double q = center[a];
    const double p = -m * w * displacement[a] * std::sin(w * t);
    const double dx = x - q;
    return std::polar(std::exp(-0.5 * m * w * dx * dx), p * x - 0.5 * w * t - 0.5 * p * q);
  });
}

double energy(const WaveFunction& psi, const Potential& v, const ParticleModel& model) {
  psi.validate();
  model.validate(psi.grid.dim());
  const GridSpec& grid = psi.grid;
  Spectral spectral(grid);
  auto spectrum = psi.amplitudes;
  spectral.forward(spectrum);
  double kinetic = 0.0;
  for (std::size_t flat = 0; flat < spectrum.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    double e = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double k = grid.wavenumber(a, idx[a]) + psi.twist[a];
      e += k * k / (2.0 * model.mass(a));
    }
    kinetic += e * std::norm(spectrum[flat]);
  }
  kinetic /= static_cast<double>(grid.size());
  const auto vs = v.sample(grid, psi.time);
  double potential = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double r = std::norm(psi.amplitudes[i]);
    potential += vs[i] * r;
    norm += r;
  }
  return (kinetic + potential) / norm;
}

double density_mean(const WaveFunction& psi, int axis) {
  double s = 0.0, n = 0.0;
  for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
    const double r = std::norm(psi.amplitudes[i]);
    s += r * psi.grid.node(i)[axis];
    n += r;
  }
  return s / n;
}

double density_variance(const WaveFunction& psi, int axis) {
  const double mean = density_mean(psi, axis);
  double s = 0.0, n = 0.0;
  for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
    const double r = std::norm(psi.amplitudes[i]);
    const double dx = psi.grid.node(i)[axis] - mean;
    s += r * dx * dx;
    n += r;
  }
  return s / n;
}

}  // namespace pwlab
