#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pwlab/fields.hpp"
#include "pwlab/kernels.hpp"

namespace pwlab {

inline constexpr double kDefaultNodeFloorRel = 1e-12;

enum class GradientMethod { spectral, central_difference };

/// Pointwise |Psi|^2.
DensityField density(const WaveFunction& psi, Execution exec = Execution::parallel);

/// Absolute floor used to mark near-nodes: rel * max |Psi|^2.
double node_floor_for(const WaveFunction& psi, double rel = kDefaultNodeFloorRel);

/// Guidance velocity Im(Psi* dPsi) / (m |Psi|^2) per axis. The phase itself is
/// never unwrapped. Nodes with |Psi|^2 < node_floor are marked invalid.
VelocityField phase_gradient(const WaveFunction& psi, const ParticleModel& model,
                             double node_floor,
                             GradientMethod method = GradientMethod::spectral,
                             Execution exec = Execution::parallel);

/// Convenience overload with the default relative floor.
VelocityField phase_gradient(const WaveFunction& psi, const ParticleModel& model);

/// Probability current Im(Psi* dPsi)/m per axis; no division, so defined at
/// nodes too.
VectorField probability_current(const WaveFunction& psi, const ParticleModel& model,
                                Execution exec = Execution::parallel);

/// Multilinear interpolation with periodic wrap. Throws NodeProximity if a
/// stencil node carrying nonzero weight is marked invalid.
Point interpolate(const VectorField& field, const Point& x);
double interpolate(const DensityField& field, const Point& x);
double interpolate(const QuantumPotentialField& field, const Point& x);

/// Gradient of the multilinear interpolant of a nodal table.
Point interpolate_gradient(const GridSpec& grid, std::span<const double> values,
                           const Point& x);

enum class SamplingScheme {
  /// Uniforms (i + U_i) / n, one per stratum of the cumulative distribution.
  stratified,
  /// Independent uniforms.
  iid,
};

/// Draws n points by inverse CDF over the row-major cell index (cells are
/// centred on nodes) with uniform jitter inside the selected cell.
/// Deterministic for a fixed seed.
std::vector<Point> sample_density(const DensityField& density, std::size_t n,
                                  std::uint64_t seed,
                                  SamplingScheme scheme = SamplingScheme::stratified);

/// Kolmogorov-Smirnov distance, per axis, between a weighted point set and
/// the axis marginal of a nodal density (piecewise constant over node-centred
/// cells). Empty weights mean equal weights.
std::vector<double> ks_distance_per_axis(std::span<const Point> points,
                                         std::span<const double> weights,
                                         const DensityField& density);

}  // namespace pwlab
