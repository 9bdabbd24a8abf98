#include "pwlab/classical.hpp"

#include <cmath>

#include "pwlab/error.hpp"

namespace pwlab {

Trajectory integrate_newton(const Potential& v, const ParticleModel& model, const Point& x0,
                            const Point& v0, double t_final, double dt, double t0) {
  const int d = model.dim();
  if (d < 1 || d > kMaxDim) throw Error(ErrorKind::InvalidArgument, "model dimension must be 1..3");
  model.validate(d);
  v.validate(d);
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (!std::isfinite(t_final) || t_final < t0)
    throw Error(ErrorKind::InvalidArgument, "t_final must be finite and >= t0");
  for (int a = 0; a < d; ++a)
    if (!std::isfinite(x0[a]) || !std::isfinite(v0[a]))
      throw Error(ErrorKind::NonFinite, "initial state must be finite");

  using State = std::array<double, 2 * kMaxDim>;
  auto rhs = [&](double t, const State& y) {
    Point x{};
    for (int a = 0; a < d; ++a) x[a] = y[a];
    const Point g = v.gradient(x, d, t);
    State dy{};
    for (int a = 0; a < d; ++a) {
      dy[a] = y[kMaxDim + a];
      dy[kMaxDim + a] = -g[a] / model.mass(a);
    }
    return dy;
  };

  Trajectory traj;
  traj.dim = d;
  traj.scheme = "newton";
  State y{};
  for (int a = 0; a < d; ++a) {
    y[a] = x0[a];
    y[kMaxDim + a] = v0[a];
  }
  auto push = [&](double t) {
    Point x{}, vel{};
    for (int a = 0; a < d; ++a) {
      x[a] = y[a];
      vel[a] = y[kMaxDim + a];
    }
    traj.times.push_back(t);
    traj.points.push_back(x);
    traj.velocities.push_back(vel);
  };
  push(t0);
  const int n = step_count(t0, t_final, dt);
  const double h = n > 0 ? (t_final - t0) / n : 0.0;
  for (int k = 0; k < n; ++k) {
    y = rk4_step(y, t0 + k * h, h, rhs);
    for (int a = 0; a < 2 * d; ++a)
      if (!std::isfinite(y[a < d ? a : kMaxDim + a - d]))
        throw Error(ErrorKind::NonFinite, "classical trajectory became non-finite");
    push(k + 1 == n ? t_final : t0 + (k + 1) * h);
  }
  return traj;
}

double classical_energy(const Potential& v, const ParticleModel& model, const Point& x,
                        const Point& velocity, double t) {
  const int d = model.dim();
  double e = v.value(x, d, t);
  for (int a = 0; a < d; ++a) e += 0.5 * model.mass(a) * velocity[a] * velocity[a];
  return e;
}

}  // namespace pwlab
