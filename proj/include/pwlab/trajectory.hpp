#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pwlab/error.hpp"
#include "pwlab/grid.hpp"

namespace pwlab {

struct Trajectory {
  int dim = 1;
  std::string scheme;
  std::vector<double> times;
  std::vector<Point> points;
  std::vector<Point> velocities;  // empty when not stored

  const Point& back() const { return points.back(); }
  bool has_velocities() const { return !velocities.empty(); }
};

/// Per-start outcome of a batch integration, in input order.
struct EnsembleResult {
  std::vector<std::optional<Trajectory>> trajectories;
  std::vector<std::optional<Error>> errors;

  std::size_t failures() const;
};

/// Number of fixed steps covering [t0, t1] with step at most max_dt.
int step_count(double t0, double t1, double max_dt);

/// Classical fourth-order Runge-Kutta step for a first-order system
/// y' = f(t, y) where y packs up to 2 * kMaxDim reals.
template <class State, class Rhs>
State rk4_step(const State& y, double t, double h, Rhs&& f) {
  auto axpy = [](const State& a, double s, const State& b) {
    State r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * b[i];
    return r;
  };
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State k4 = f(t + h, axpy(y, h, k3));
  State out = y;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

/// Walks [t0, t1] in fixed steps of at most max_dt, restarting the step grid
/// at every snapshot time so that no step straddles one. Calls
/// step(t_start, h, t_end) for each step; t_end lands exactly on interval ends.
template <class Step>
void march_intervals(std::span<const double> snapshots, double t0, double t1,
                     double max_dt, Step&& step) {
  double t = t0;
  for (std::size_t i = 0; i + 1 < snapshots.size() && t < t1; ++i) {
    const double a = snapshots[i] > t ? snapshots[i] : t;
    const double b = snapshots[i + 1] < t1 ? snapshots[i + 1] : t1;
    if (b <= a) continue;
    const int n = step_count(a, b, max_dt);
    const double h = (b - a) / n;
    for (int k = 0; k < n; ++k) step(a + k * h, h, k + 1 == n ? b : a + (k + 1) * h);
    t = b;
  }
}

double max_position_gap(const Trajectory& a, const Trajectory& b);

}  // namespace pwlab
