#pragma once

#include <string>
#include <vector>

#include "pwlab/fields.hpp"
#include "pwlab/kernels.hpp"
#include "pwlab/potential.hpp"
#include "pwlab/spectral.hpp"

namespace pwlab {

inline constexpr double kDefaultDt = 1e-3;
inline constexpr int kDefaultSnapshotStride = 10;
inline constexpr const char* kStrangScheme = "strang-2";

struct EvolutionRecord {
  std::vector<WaveFunction> snapshots;
  double dt = kDefaultDt;
  std::string scheme = kStrangScheme;
  Potential potential;
  ParticleModel model;

  double t_begin() const { return snapshots.front().time; }
  double t_end() const { return snapshots.back().time; }
  const GridSpec& grid() const { return snapshots.front().grid; }
  void validate() const;
};

/// Strang split-step propagator for one grid, potential, model and dt.
///
/// Half potential step, exact kinetic step in Fourier space, half potential
/// step. Time-dependent potentials are sampled at the start and end of the
/// step. Kinetic factors are cached per twist.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const GridSpec& grid, Potential potential,
                      ParticleModel model, double dt,
                      Execution exec = Execution::parallel);

  /// Advances psi by dt in place (a negative dt steps backward). Throws
  /// NonFinite.
  void step(WaveFunction& psi);

  double dt() const { return dt_; }

 private:
  void refresh_kinetic(const Point& twist);

  GridSpec grid_;
  Potential potential_;
  ParticleModel model_;
  double dt_;
  Execution exec_;
  Spectral spectral_;
  std::vector<double> static_potential_;
  std::vector<Complex> kinetic_;
  Point kinetic_twist_{};
  bool kinetic_ready_ = false;
};

WaveFunction step_splitstep(const WaveFunction& psi, const Potential& v,
                            const ParticleModel& model, double dt);

/// Repeated split steps from psi0.time to t_final. Snapshots at every
/// `snapshot_stride` steps plus the final time.
EvolutionRecord evolve(const WaveFunction& psi0, const Potential& v,
                       const ParticleModel& model, double t_final,
                       double dt = kDefaultDt,
                       int snapshot_stride = kDefaultSnapshotStride,
                       Execution exec = Execution::parallel);

/// Normalized exp(-|x - x0|^2 / (4 sigma^2) + i p.x). Throws PacketTruncated
/// when more than 1e-6 of the continuum mass lies outside the box.
WaveFunction gaussian_packet(const GridSpec& grid, const Point& center,
                             const Point& momentum, const Point& sigma);

/// Closed-form free evolution of gaussian_packet(grid, center, momentum,
/// sigma0) to time t.
WaveFunction analytic_free_gaussian(const GridSpec& grid, const Point& center,
                                    const Point& momentum, const Point& sigma0,
                                    const ParticleModel& model, double t);

/// Standard deviation of the free packet density at time t.
double free_gaussian_width(double sigma0, double mass, double t);

/// exp(i p.x) on the grid. The nearest grid wavenumber is stored in the
/// amplitudes, the remainder in the twist, so any p is represented exactly.
WaveFunction plane_wave(const GridSpec& grid, const Point& momentum);

/// Ground state of V = 1/2 sum k_a x_a^2: real, positive, normalized.
WaveFunction harmonic_ground_state(const GridSpec& grid, std::span<const double> k,
                                   const ParticleModel& model);
double harmonic_ground_energy(std::span<const double> k, const ParticleModel& model);

/// Closed-form coherent state of the harmonic oscillator: ground state
/// displaced by `displacement` at t = 0 with zero momentum, evolved to t.
WaveFunction harmonic_coherent_state(const GridSpec& grid, std::span<const double> k,
                                     const ParticleModel& model,
                                     const Point& displacement, double t);

/// <H> with spectral kinetic energy.
double energy(const WaveFunction& psi, const Potential& v, const ParticleModel& model);

/// Position mean and variance of |Psi|^2 along an axis.
double density_mean(const WaveFunction& psi, int axis);
double density_variance(const WaveFunction& psi, int axis);

}  // namespace pwlab
