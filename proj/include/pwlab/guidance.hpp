#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pwlab/core.hpp"
#include "pwlab/schrodinger.hpp"
#include "pwlab/trajectory.hpp"

namespace pwlab {

struct IntegrationOptions {
  /// Fixed RK4 step; shortened per snapshot interval so steps never straddle
  /// a snapshot.
  double dt = kDefaultDt;
  /// Node floor relative to the max density of each snapshot.
  double node_floor_rel = kDefaultNodeFloorRel;
  /// Reported alongside results; the scheme is fixed-step.
  double tolerance = 1e-8;
  std::optional<double> t_start;
  std::optional<double> t_end;
  bool store_velocities = true;
  /// Keep only the final point (ensemble transport).
  bool endpoint_only = false;
};

/// Guidance velocity fields of every snapshot in a record. Values between
/// snapshots are linear in time; values between nodes are multilinear.
class GuidanceField {
 public:
  GuidanceField(const EvolutionRecord& record, const ParticleModel& model,
                double node_floor_rel = kDefaultNodeFloorRel,
                Execution exec = Execution::parallel);

  /// Throws OutOfSpan outside the record and NodeProximity near nodes.
  Point velocity(const Point& x, double t) const;

  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  int dim() const { return grid_.dim(); }
  const GridSpec& grid() const { return grid_; }
  std::span<const double> snapshot_times() const { return times_; }
  const VelocityField& field(std::size_t i) const { return fields_[i]; }

 private:
  GridSpec grid_;
  std::vector<double> times_;
  std::vector<VelocityField> fields_;
};

/// Bracketing snapshots for time t: (i0, i1, weight of i1). Exact snapshot
/// times return i0 == i1. Throws OutOfSpan.
struct TimeBracket {
  std::size_t lower;
  std::size_t upper;
  double weight;
};
TimeBracket bracket_time(std::span<const double> times, double t);

Trajectory integrate_guidance(const GuidanceField& field, const Point& x0,
                              const IntegrationOptions& opts = {});
Trajectory integrate_guidance(const EvolutionRecord& record, const ParticleModel& model,
                              const Point& x0, const IntegrationOptions& opts = {});

EnsembleResult integrate_ensemble(const GuidanceField& field,
                                  std::span<const Point> starts,
                                  const IntegrationOptions& opts = {},
                                  Execution exec = Execution::parallel);
EnsembleResult integrate_ensemble(const EvolutionRecord& record,
                                  const ParticleModel& model,
                                  std::span<const Point> starts,
                                  const IntegrationOptions& opts = {},
                                  Execution exec = Execution::parallel);

}  // namespace pwlab
