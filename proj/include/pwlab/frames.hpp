#pragma once

#include <array>
#include <variant>
#include <vector>

#include "pwlab/guidance.hpp"
#include "json.hpp"

namespace pwlab {

using Matrix = std::array<std::array<double, kMaxDim>, kMaxDim>;

Matrix identity_matrix();
/// Rotation by `angle` in the (axis_a, axis_b) plane.
Matrix plane_rotation(int axis_a, int axis_b, double angle);

struct BoostFrame {
  Point velocity{};
};
struct EuclideanFrame {
  Matrix rotation = identity_matrix();
  Point translation{};
};
struct AcceleratedFrame {
  Point acceleration{};
};

/// Tagged frame change. Boost and Euclidean kinds act on wavefunctions;
/// uniform acceleration acts on classical potentials and trajectories.
struct FrameTransform {
  int dim = 1;
  std::variant<BoostFrame, EuclideanFrame, AcceleratedFrame> kind;

  /// Checks R orthogonal with det 1 within 1e-12.
  void validate() const;
  bool acts_on_wavefunctions() const;
};

/// Galilean boost x' = x - v t, t' = t with the compensating phase
/// exp(i(1/2 sum m v^2 t - sum m v.x)). The spatial relabeling is a spectral
/// translation; the linear phase goes into the twist; the time-only phase is
/// added to global_phase. Throws SupportWrap if |v t| exceeds half the box.
WaveFunction boost_wavefunction(const WaveFunction& psi, const ParticleModel& model,
                                const Point& v);

/// max over valid nodes of |grad' S'(x') - (grad S(x) - m v)|, x = x' + v t.
/// The unprimed side differentiates Psi on the original grid and resamples
/// it at x; the primed side is differentiated from the boosted wavefunction.
double check_phase_gradient_shift(const WaveFunction& psi, const ParticleModel& model,
                                  const Point& v,
                                  double node_floor_rel = kDefaultNodeFloorRel);

/// Scalar pullback Psi'(x') = Psi(x) with x' = R x + a. Rotations are built
/// from exact spectral shears. Throws SupportWrap when the translation
/// exceeds half the box or the shear shifts wrap significant mass.
WaveFunction euclidean_transform_wavefunction(const WaveFunction& psi,
                                              const Matrix& rotation,
                                              const Point& translation);

WaveFunction apply_frame(const FrameTransform& frame, const WaveFunction& psi,
                         const ParticleModel& model);

/// V' = V + sum m a.x; the gradient-free -1/2 sum m a^2 t^2 term is kept as
/// a note only.
Potential accelerated_frame_potential(const Potential& v, const ParticleModel& model,
                                      const Point& a);

/// Extra acceleration -grad(V' - V)/m introduced by the frame change.
Point fictitious_acceleration(const Potential& v, const Potential& v_prime,
                              const ParticleModel& model, const Point& x, double t);

/// Potential seen in the boosted frame, V'(x', t) = V(x' + v t, t). Only
/// free and uniform-gradient terms are supported (they stay well defined on
/// the periodic box); the resulting constant shift is noted, not stored.
Potential boosted_potential(const Potential& v, const Point& velocity);

struct BoostAuditOptions {
  double dt = kDefaultDt;
  int snapshot_stride = kDefaultSnapshotStride;
  IntegrationOptions integration{};
  Execution exec = Execution::parallel;
};

struct BoostAuditReport {
  Point velocity{};
  std::vector<Point> starts;
  std::vector<double> gaps;
  double max_gap = 0.0;
  double t_final = 0.0;
  std::vector<Trajectory> unprimed;
  std::vector<Trajectory> primed;
};

/// Integrates guidance trajectories from Psi in the original frame and from
/// boost_wavefunction(Psi) evolved independently in the boosted frame, and
/// compares X(t) - v t with X'(t).
BoostAuditReport boost_covariance_audit(const WaveFunction& psi0, const Potential& v,
                                        const ParticleModel& model, const Point& velocity,
                                        std::span<const Point> starts, double t_final,
                                        const BoostAuditOptions& opts = {});

nlohmann::json to_json(const BoostAuditReport& report);

}  // namespace pwlab
