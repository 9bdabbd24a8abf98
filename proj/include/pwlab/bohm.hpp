#pragma once

#include <vector>

#include "pwlab/guidance.hpp"

namespace pwlab {

/// Q = sum_a -(1/2 m_a) d_a^2 R / R with R = |Psi| and a spectral Laplacian.
/// Nodes below node_floor (on |Psi|^2) are masked.
QuantumPotentialField quantum_potential(const WaveFunction& psi,
                                        const ParticleModel& model,
                                        double node_floor,
                                        Execution exec = Execution::parallel);

/// -grad Q per axis, assembled from spectral derivatives of R so that the
/// masked Q never has to be differentiated.
VectorField quantum_force(const WaveFunction& psi, const ParticleModel& model,
                          double node_floor, Execution exec = Execution::parallel);

/// Acceleration field -grad(V + Q)/m over a record: quantum part
/// interpolated in space and time, classical part evaluated analytically.
class BohmForceField {
 public:
  BohmForceField(const EvolutionRecord& record, const Potential& v,
                 const ParticleModel& model,
                 double node_floor_rel = kDefaultNodeFloorRel,
                 Execution exec = Execution::parallel);

  Point acceleration(const Point& x, double t) const;

  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  int dim() const { return grid_.dim(); }
  std::span<const double> snapshot_times() const { return times_; }

 private:
  GridSpec grid_;
  Potential potential_;
  ParticleModel model_;
  std::vector<double> times_;
  std::vector<VectorField> forces_;
};

/// m d^2X/dt^2 = -grad(V + Q), RK4 on (X, dX/dt). Trajectory scheme is
/// "second-order" and velocities are always stored.
Trajectory integrate_second_order(const BohmForceField& field, const Point& x0,
                                  const Point& v0, const IntegrationOptions& opts = {});
Trajectory integrate_second_order(const EvolutionRecord& record, const Potential& v,
                                  const ParticleModel& model, const Point& x0,
                                  const Point& v0, const IntegrationOptions& opts = {});

struct EquivalenceResult {
  Point x0{};
  Point v0{};
  Trajectory first_order;
  Trajectory second_order;
  /// max |X_1(t) - X_2(t)| over common times.
  double position_gap = 0.0;
  /// max |dX_2/dt - v_guidance(X_2, t)| along the second-order path.
  double velocity_constraint_gap = 0.0;
};

/// Runs both formulations from x0 with identical dt. The second-order run
/// starts from the guidance velocity at (x0, t0) plus `v0_offset`.
EquivalenceResult compare_first_second_order(const EvolutionRecord& record,
                                             const ParticleModel& model,
                                             const Point& x0, const Point& v0_offset,
                                             const IntegrationOptions& opts = {});

}  // namespace pwlab
