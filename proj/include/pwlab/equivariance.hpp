#pragma once

#include <cstdint>
#include <vector>

#include "pwlab/guidance.hpp"
#include "json.hpp"

namespace pwlab {

struct EnsembleState {
  int dim = 1;
  std::vector<Point> points;
  /// Empty means equal weights.
  std::vector<double> weights;
  double time = 0.0;

  double weight(std::size_t i) const;
  void validate() const;
};

/// L2 norm over valid nodes of d|Psi|^2/dt + div(|Psi|^2 grad S / m) at
/// snapshot t_index. The time derivative is a three-point centred difference
/// (non-uniform spacing allowed); the divergence is spectral. The current is
/// built with `model`, which need not match the evolution masses.
double continuity_residual(const EvolutionRecord& record, const ParticleModel& model,
                           std::size_t t_index,
                           double node_floor_rel = kDefaultNodeFloorRel);

struct TransportResult {
  EnsembleState state;
  std::vector<std::size_t> dropped;
  std::vector<Error> dropped_errors;
  double dropped_weight = 0.0;
  double kept_weight = 0.0;
};

/// Pushes every ensemble point along its guidance trajectory to the end of
/// the record. Failed points are dropped with their weight reported; throws
/// DegenerateEnsemble if more than 1% of the weight is lost.
TransportResult transport_ensemble(const GuidanceField& field, const EnsembleState& ens0,
                                   const IntegrationOptions& opts = {},
                                   Execution exec = Execution::parallel);
TransportResult transport_ensemble(const EvolutionRecord& record,
                                   const ParticleModel& model, const EnsembleState& ens0,
                                   const IntegrationOptions& opts = {},
                                   Execution exec = Execution::parallel);

/// Equilibrium ensemble drawn from |Psi|^2 of the first snapshot.
EnsembleState equilibrium_ensemble(const WaveFunction& psi, std::size_t n,
                                   std::uint64_t seed,
                                   SamplingScheme scheme = SamplingScheme::stratified);

/// Max over axes of the KS distance between an ensemble and a density.
double ks_distance(const EnsembleState& ens, const DensityField& density);

struct UniquenessReport {
  double mass_scale = 1.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> ks_wrong_per_axis;
  std::vector<double> ks_control_per_axis;
  double ks_wrong = 0.0;
  double ks_control = 0.0;
  double ratio = 0.0;
  double dropped_weight_wrong = 0.0;
  double dropped_weight_control = 0.0;
};

/// Transports one equilibrium ensemble with the true masses (control) and
/// with masses scaled by mass_scale while Psi keeps evolving with the true
/// masses, then compares both endpoint sets with |Psi|^2 at the final time.
UniquenessReport coefficient_uniqueness_experiment(
    const EvolutionRecord& record, const ParticleModel& model_true, double mass_scale,
    std::size_t n, std::uint64_t seed, const IntegrationOptions& opts = {},
    Execution exec = Execution::parallel);

nlohmann::json to_json(const UniquenessReport& report);

}  // namespace pwlab
