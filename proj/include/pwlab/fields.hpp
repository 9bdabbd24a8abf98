#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pwlab/grid.hpp"

namespace pwlab {

using Complex = std::complex<double>;

/// Particle masses, one per configuration-space axis.
struct ParticleModel {
  std::vector<double> masses;
  std::vector<std::string> labels;

  static ParticleModel uniform(int dim, double mass);

  double mass(int axis) const { return masses[axis]; }
  int dim() const { return static_cast<int>(masses.size()); }
  /// Throws InvalidArgument unless there is one positive mass per grid axis.
  void validate(int grid_dim) const;
  ParticleModel scaled(double factor) const;
};

/// Wavefunction on a periodic grid in twisted (Bloch) form:
///
///   Psi(x) = exp(i (global_phase + twist . x)) * amplitudes(x)
///
/// The amplitude block is periodic on the box while the twist carries a
/// momentum offset that need not be a grid wavenumber. Boosts move their
/// phase into the twist so that they stay exact on a periodic grid.
struct WaveFunction {
  GridSpec grid;
  std::vector<Complex> amplitudes;
  Point twist{};
  double global_phase = 0.0;
  double time = 0.0;

  WaveFunction() = default;
  WaveFunction(GridSpec g, std::vector<Complex> a, double t = 0.0);

  /// Full value of Psi at node `flat`, twist and global phase applied.
  Complex value(std::size_t flat) const;
  double norm_squared() const;
  void normalize();
  void validate() const;
};

/// max_j |Psi_a(x_j) - Psi_b(x_j)| over full values (twist and global phase
/// applied). Grids must match.
double max_abs_difference(const WaveFunction& a, const WaveFunction& b);

struct DensityField {
  GridSpec grid;
  std::vector<double> values;
  double time = 0.0;
  bool probability = true;

  double integral() const;
  double max() const;
};

/// `dim` real components per node plus a validity mask; nodes whose density
/// fell below the node floor are marked invalid rather than filled in.
struct VectorField {
  GridSpec grid;
  std::array<std::vector<double>, kMaxDim> components;
  std::vector<std::uint8_t> valid;
  double time = 0.0;

  std::size_t invalid_count() const;
};

using VelocityField = VectorField;

struct QuantumPotentialField {
  GridSpec grid;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;
  double time = 0.0;
};

}  // namespace pwlab
