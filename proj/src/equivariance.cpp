#include "pwlab/equivariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pwlab/error.hpp"
#include "pwlab/io.hpp"
#include "pwlab/spectral.hpp"

namespace pwlab {

double EnsembleState::weight(std::size_t i) const {
  return weights.empty() ? 1.0 / static_cast<double>(points.size()) : weights[i];
}

void EnsembleState::validate() const {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "ensemble is empty");
  if (weights.empty()) return;
  if (weights.size() != points.size())
    throw Error(ErrorKind::InvalidArgument, "ensemble weights must match points");
  double s = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "weights must be nonnegative");
    s += w;
  }
  if (std::abs(s - 1.0) > 1e-10)
    throw Error(ErrorKind::InvalidArgument, "ensemble weights must sum to 1");
}

double continuity_residual(const EvolutionRecord& record, const ParticleModel& model,
                           std::size_t t_index, double node_floor_rel) {
  record.validate();
  if (t_index < 1 || t_index + 1 >= record.snapshots.size())
    throw Error(ErrorKind::OutOfSpan,
                "continuity residual needs snapshots on both sides of t_index");
  const auto& prev = record.snapshots[t_index - 1];
  const auto& mid = record.snapshots[t_index];
  const auto& next = record.snapshots[t_index + 1];
  const GridSpec& g = mid.grid;
  const double h1 = mid.time - prev.time;
  const double h2 = next.time - mid.time;

  const DensityField r0 = density(prev), r1 = density(mid), r2 = density(next);
  const VectorField j = probability_current(mid, model);
  const Spectral spectral(g);
  std::vector<double> divergence(g.size(), 0.0);
  for (int a = 0; a < g.dim(); ++a) {
    std::vector<Complex> c(j.components[a].begin(), j.components[a].end());
    const auto dc = spectral.derivative(c, a, 1);
    for (std::size_t i = 0; i < g.size(); ++i) divergence[i] += dc[i].real();
  }
  const double floor = node_floor_for(mid, node_floor_rel);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (r1.values[i] < floor) continue;
    const double drho = (h1 * h1 * (r2.values[i] - r1.values[i]) +
                         h2 * h2 * (r1.values[i] - r0.values[i])) /
                        (h1 * h2 * (h1 + h2));
    const double r = drho + divergence[i];
    sum += r * r;
  }
  return std::sqrt(sum * g.cell_volume());
}

TransportResult transport_ensemble(const GuidanceField& field, const EnsembleState& ens0,
                                   const IntegrationOptions& opts, Execution exec) {
  ens0.validate();
  if (ens0.dim != field.dim())
    throw Error(ErrorKind::InvalidArgument, "ensemble and record dims differ");
  IntegrationOptions o = opts;
  o.endpoint_only = true;
  o.store_velocities = false;
  const EnsembleResult batch = integrate_ensemble(field, ens0.points, o, exec);

  TransportResult out;
  out.state.dim = ens0.dim;
  out.state.time = o.t_end.value_or(field.t_end());
  const bool weighted = !ens0.weights.empty();
  for (std::size_t i = 0; i < ens0.points.size(); ++i) {
    const double w = ens0.weight(i);
    if (batch.errors[i]) {
      out.dropped.push_back(i);
      out.dropped_errors.push_back(*batch.errors[i]);
      out.dropped_weight += w;
      continue;
    }
    out.state.points.push_back(batch.trajectories[i]->back());
    if (weighted) out.state.weights.push_back(w);
    out.kept_weight += w;
  }
  if (!weighted && !out.dropped.empty()) {
    // Keep the original per-point weight so the totals stay explicit.
    out.state.weights.assign(out.state.points.size(), 1.0 / ens0.points.size());
  }
  if (out.dropped_weight > 0.01)
    throw Error(ErrorKind::DegenerateEnsemble,
                "transport dropped " + std::to_string(out.dropped_weight) +
                    " of the ensemble weight (" + std::to_string(out.dropped.size()) +
                    " points)");
  return out;
}

TransportResult transport_ensemble(const EvolutionRecord& record, const ParticleModel& model,
                                   const EnsembleState& ens0, const IntegrationOptions& opts,
                                   Execution exec) {
  const GuidanceField field(record, model, opts.node_floor_rel, exec);
  return transport_ensemble(field, ens0, opts, exec);
}

EnsembleState equilibrium_ensemble(const WaveFunction& psi, std::size_t n, std::uint64_t seed,
                                   SamplingScheme scheme) {
  EnsembleState ens;
  ens.dim = psi.grid.dim();
  ens.time = psi.time;
  ens.points = sample_density(density(psi), n, seed, scheme);
  return ens;
}

double ks_distance(const EnsembleState& ens, const DensityField& density) {
  const auto per_axis = ks_distance_per_axis(ens.points, ens.weights, density);
  return *std::max_element(per_axis.begin(), per_axis.end());
}

UniquenessReport coefficient_uniqueness_experiment(const EvolutionRecord& record,
                                                   const ParticleModel& model_true,
                                                   double mass_scale, std::size_t n,
                                                   std::uint64_t seed,
                                                   const IntegrationOptions& opts,
                                                   Execution exec) {
  if (!(mass_scale > 0.0) || mass_scale == 1.0 || !std::isfinite(mass_scale))
    throw Error(ErrorKind::InvalidArgument, "mass_scale must be positive and different from 1");
  record.validate();
  const EnsembleState ens0 = equilibrium_ensemble(record.snapshots.front(), n, seed);
  const DensityField final_density = density(record.snapshots.back());

  const TransportResult control = transport_ensemble(record, model_true, ens0, opts, exec);
  const TransportResult wrong =
      transport_ensemble(record, model_true.scaled(mass_scale), ens0, opts, exec);

  UniquenessReport r;
  r.mass_scale = mass_scale;
  r.n = n;
  r.seed = seed;
  r.ks_control_per_axis =
      ks_distance_per_axis(control.state.points, control.state.weights, final_density);
  r.ks_wrong_per_axis =
      ks_distance_per_axis(wrong.state.points, wrong.state.weights, final_density);
  r.ks_control = *std::max_element(r.ks_control_per_axis.begin(), r.ks_control_per_axis.end());
  r.ks_wrong = *std::max_element(r.ks_wrong_per_axis.begin(), r.ks_wrong_per_axis.end());
  r.ratio = r.ks_control > 0.0 ? r.ks_wrong / r.ks_control
                               : std::numeric_limits<double>::infinity();
  r.dropped_weight_control = control.dropped_weight;
  r.dropped_weight_wrong = wrong.dropped_weight;
  return r;
}

nlohmann::json to_json(const UniquenessReport& r) {
  return {{"mass_scale", r.mass_scale},
          {"n", r.n},
          {"seed", r.seed},
          {"ks_wrong_per_axis", r.ks_wrong_per_axis},
          {"ks_control_per_axis", r.ks_control_per_axis},
          {"ks_wrong", r.ks_wrong},
          {"ks_control", r.ks_control},
          {"ratio", r.ratio},
          {"dropped_weight_control", r.dropped_weight_control},
          {"dropped_weight_wrong", r.dropped_weight_wrong}};
}

}  // namespace pwlab
