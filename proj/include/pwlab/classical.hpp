#pragma once

#include "pwlab/potential.hpp"
#include "pwlab/trajectory.hpp"

namespace pwlab {

/// m d^2X/dt^2 = -grad V(X, t) by fixed-step RK4 from t0 to t_final.
/// Trajectory scheme is "newton"; velocities are stored.
Trajectory integrate_newton(const Potential& v, const ParticleModel& model,
                            const Point& x0, const Point& v0, double t_final,
                            double dt, double t0 = 0.0);

/// Kinetic plus potential energy of a classical state.
double classical_energy(const Potential& v, const ParticleModel& model,
                        const Point& x, const Point& velocity, double t);

}  // namespace pwlab
