#include "pwlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pwlab/error.hpp"

namespace pwlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NodeProximity: return "NodeProximity";
    case ErrorKind::OutOfSpan: return "OutOfSpan";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::PacketTruncated: return "PacketTruncated";
    case ErrorKind::SupportWrap: return "SupportWrap";
    case ErrorKind::DegenerateDensity: return "DegenerateDensity";
    case ErrorKind::DegenerateEnsemble: return "DegenerateEnsemble";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

Error::Error(ErrorKind kind, const std::string& message, double time,
             const Point& where, int dim)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      time_(time),
      location_(where),
      dim_(dim) {}

ParticleModel ParticleModel::uniform(int dim, double mass) {
  ParticleModel m;
  m.masses.assign(static_cast<std::size_t>(dim), mass);
  return m;
}

void ParticleModel::validate(int grid_dim) const {
  if (dim() != grid_dim)
    throw Error(ErrorKind::InvalidArgument, "model needs one mass per grid axis");
  for (double m : masses)
    if (!(m > 0.0) || !std::isfinite(m))
      throw Error(ErrorKind::InvalidArgument, "masses must be positive and finite");
  if (!labels.empty() && labels.size() != masses.size())
    throw Error(ErrorKind::InvalidArgument, "labels must match masses");
}

ParticleModel ParticleModel::scaled(double factor) const {
  ParticleModel out = *this;
  for (double& m : out.masses) m *= factor;
  return out;
}

WaveFunction::WaveFunction(GridSpec g, std::vector<Complex> a, double t)
    : grid(std::move(g)), amplitudes(std::move(a)), time(t) {
  validate();
}

Complex WaveFunction::value(std::size_t flat) const {
  double phase = global_phase;
  const Point x = grid.node(flat);
  for (int a = 0; a < grid.dim(); ++a) phase += twist[a] * x[a];
  return amplitudes[flat] * std::polar(1.0, phase);
}

double WaveFunction::norm_squared() const {
  double s = 0.0;
  for (const auto& z : amplitudes) s += std::norm(z);
  return s * grid.cell_volume();
}

void WaveFunction::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2))
    throw Error(ErrorKind::NonFinite, "cannot normalize a zero or non-finite wavefunction");
  const double s = 1.0 / std::sqrt(n2);
  for (auto& z : amplitudes) z *= s;
}

void WaveFunction::validate() const {
  if (grid.dim() == 0) throw Error(ErrorKind::InvalidArgument, "wavefunction has no grid");
  if (amplitudes.size() != grid.size())
    throw Error(ErrorKind::InvalidArgument, "amplitude count does not match grid size");
}

double max_abs_difference(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid == b.grid))
    throw Error(ErrorKind::InvalidArgument, "wavefunctions live on different grids");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
    worst = std::max(worst, std::abs(a.value(i) - b.value(i)));
  return worst;
}

double DensityField::integral() const {
  return std::accumulate(values.begin(), values.end(), 0.0) * grid.cell_volume();
}

double DensityField::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::size_t VectorField::invalid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), 0));
}

}  // namespace pwlab
