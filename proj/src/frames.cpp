#include "pwlab/frames.hpp"

#include <cmath>
#include <numbers>

#include "pwlab/error.hpp"
#include "pwlab/io.hpp"
#include "pwlab/spectral.hpp"

namespace pwlab {

namespace {

// Mass below this fraction of the peak density may wrap around the box
// during a shear without being reported.
constexpr double kWrapDensityRel = 1e-16;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Moves whole multiples of the grid wavenumber from the twist into the
// amplitudes, leaving |twist_a| <= pi / L_a.
void fold_twist(WaveFunction& psi) {
  const GridSpec& g = psi.grid;
  for (int a = 0; a < g.dim(); ++a) {
    const double unit = 2.0 * std::numbers::pi / g.length(a);
    const double j = std::round(psi.twist[a] / unit);
    if (j == 0.0) continue;
    const double k = j * unit;
    std::vector<Complex> phase(g.points(a));
    for (int i = 0; i < g.points(a); ++i) phase[i] = std::polar(1.0, k * g.coordinate(a, i));
    for (std::size_t flat = 0; flat < psi.amplitudes.size(); ++flat)
      psi.amplitudes[flat] *= phase[g.unflatten(flat)[a]];
    psi.twist[a] -= k;
  }
}

// Content at y moves to y - shift_of(line); reports if significant mass
// would leave the box.
void check_shear_wrap(const WaveFunction& psi, int axis, int other, double factor) {
  const GridSpec& g = psi.grid;
  double peak = 0.0;
  for (const auto& z : psi.amplitudes) peak = std::max(peak, std::norm(z));
  const double thresh = kWrapDensityRel * peak;
  for (std::size_t flat = 0; flat < psi.amplitudes.size(); ++flat) {
    if (std::norm(psi.amplitudes[flat]) <= thresh) continue;
    const auto idx = g.unflatten(flat);
    const double dest = g.coordinate(axis, idx[axis]) - factor * g.coordinate(other, idx[other]);
    if (dest < g.lo(axis) || dest >= g.hi(axis))
      throw Error(ErrorKind::SupportWrap,
                  "rotation would carry wavefunction support across the box boundary");
  }
}

// Pullback f -> f o P for the planar rotation P by `angle` in (p, q), built
// from three shears: P = Sx(-tan(angle/2)) Sy(sin angle) Sx(-tan(angle/2)).
void rotate_plane(WaveFunction& psi, const Spectral& spectral, int p, int q, double angle) {
  if (angle == 0.0) return;
  if (std::abs(angle) > 0.5 * std::numbers::pi) {
    rotate_plane(psi, spectral, p, q, 0.5 * angle);
    rotate_plane(psi, spectral, p, q, 0.5 * angle);
    return;
  }
  const double alpha = -std::tan(0.5 * angle);
  const double beta = std::sin(angle);
  check_shear_wrap(psi, p, q, alpha);
  spectral.shear(psi.amplitudes, p, q, alpha);
  check_shear_wrap(psi, q, p, beta);
  spectral.shear(psi.amplitudes, q, p, beta);
  check_shear_wrap(psi, p, q, alpha);
  spectral.shear(psi.amplitudes, p, q, alpha);
}

struct PlaneRotation {
  int p, q;
  double angle;
};

// Writes m (orthogonal, det 1) as an ordered product of planar rotations.
std::vector<PlaneRotation> planar_factors(Matrix m, int dim) {
  std::vector<PlaneRotation> out;
  if (dim == 2) {
    out.push_back({0, 1, std::atan2(m[1][0], m[0][0])});
    return out;
  }
  if (dim != 3) return out;
  auto eliminate = [&](int p, int q, int col) {
    const double angle = std::atan2(m[q][col], m[p][col]);
    const double c = std::cos(angle), s = std::sin(angle);
    for (int j = 0; j < 3; ++j) {
      const double a = m[p][j], b = m[q][j];
      m[p][j] = c * a + s * b;
      m[q][j] = -s * a + c * b;
    }
    out.push_back({p, q, angle});
  };
  eliminate(0, 1, 0);
  eliminate(0, 2, 0);
  eliminate(1, 2, 1);
  return out;
}

double max_abs(const Point& p, int dim) {
  double m = 0.0;
  for (int a = 0; a < dim; ++a) m = std::max(m, std::abs(p[a]));
  return m;
}

}  // namespace

Matrix identity_matrix() {
  Matrix m{};
  for (int i = 0; i < kMaxDim; ++i) m[i][i] = 1.0;
  return m;
}

Matrix plane_rotation(int axis_a, int axis_b, double angle) {
  Matrix m = identity_matrix();
  const double c = std::cos(angle), s = std::sin(angle);
  m[axis_a][axis_a] = c;
  m[axis_a][axis_b] = -s;
  m[axis_b][axis_a] = s;
  m[axis_b][axis_b] = c;
  return m;
}

namespace {

void validate_rotation(const Matrix& r, int dim) {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double dot = 0.0;
      for (int k = 0; k < dim; ++k) dot += r[k][i] * r[k][j];
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw Error(ErrorKind::InvalidArgument, "rotation matrix is not orthogonal");
    }
  double det = r[0][0];
  if (dim == 2) det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
  if (dim == 3)
    det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
          r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
          r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
  if (std::abs(det - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "rotation matrix must have determinant 1");
}

}  // namespace

void FrameTransform::validate() const {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::InvalidArgument, "frame dim must be 1..3");
  if (const auto* e = std::get_if<EuclideanFrame>(&kind)) validate_rotation(e->rotation, dim);
}

bool FrameTransform::acts_on_wavefunctions() const {
  return !std::holds_alternative<AcceleratedFrame>(kind);
}

WaveFunction boost_wavefunction(const WaveFunction& psi, const ParticleModel& model,
                                const Point& v) {
  psi.validate();
  const GridSpec& g = psi.grid;
  model.validate(g.dim());
  Point shift{};
  for (int a = 0; a < g.dim(); ++a) {
    shift[a] = v[a] * psi.time;
    if (std::abs(shift[a]) > 0.5 * g.length(a))
      throw Error(ErrorKind::SupportWrap, "boost shift exceeds half the box");
  }
  WaveFunction out = psi;
  Spectral(g).translate(out.amplitudes, shift);
  double phase = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double m = model.mass(a);
    phase += psi.twist[a] * shift[a] - 0.5 * m * v[a] * v[a] * psi.time;
    out.twist[a] = psi.twist[a] - m * v[a];
  }
  out.global_phase = psi.global_phase + phase;
  fold_twist(out);
  return out;
}

double check_phase_gradient_shift(const WaveFunction& psi, const ParticleModel& model,
                                  const Point& v, double node_floor_rel) {
  const GridSpec& g = psi.grid;
  const WaveFunction primed = boost_wavefunction(psi, model, v);
  const VelocityField vp =
      phase_gradient(primed, model, node_floor_for(primed, node_floor_rel));

  // Unprimed grad S = Im(du/u) + kappa: differentiate on the original grid,
  // then resample u and du at x = x' + v t.
  Point shift{};
  for (int a = 0; a < g.dim(); ++a) shift[a] = v[a] * psi.time;
  const Spectral spectral(g);
  std::vector<Complex> u = psi.amplitudes;
  spectral.translate(u, shift);
  const double floor = node_floor_for(psi, node_floor_rel);

  double worst = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    std::vector<Complex> du = spectral.derivative(psi.amplitudes, a, 1);
    spectral.translate(du, shift);
    const double m = model.mass(a);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!vp.valid[i] || std::norm(u[i]) < floor) continue;
      const double grad_s = (du[i] / u[i]).imag() + psi.twist[a];
      const double grad_s_primed = m * vp.components[a][i];
      worst = std::max(worst, std::abs(grad_s_primed - (grad_s - m * v[a])));
    }
  }
  return worst;
}

WaveFunction euclidean_transform_wavefunction(const WaveFunction& psi, const Matrix& rotation,
                                              const Point& translation) {
  psi.validate();
  const GridSpec& g = psi.grid;
  const int d = g.dim();
  validate_rotation(rotation, d);
  for (int a = 0; a < d; ++a)
    if (std::abs(translation[a]) > 0.5 * g.length(a))
      throw Error(ErrorKind::SupportWrap, "translation exceeds half the box");

  WaveFunction out = psi;
  const Spectral spectral(g);
  // Psi'(x') = Psi(R^T (x' - a)): amplitudes pulled back by R^T then shifted,
  // twist rotated, constant phase -(R kappa).a.
  Matrix rt{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rt[i][j] = rotation[j][i];
  bool is_identity = true;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) is_identity = is_identity && rt[i][j] == (i == j ? 1.0 : 0.0);
  if (!is_identity) {
    if (d < 2) throw Error(ErrorKind::InvalidArgument, "rotations need dim >= 2");
    for (const auto& f : planar_factors(rt, d)) rotate_plane(out, spectral, f.p, f.q, f.angle);
  }
  Point back{};
  for (int a = 0; a < d; ++a) back[a] = -translation[a];
  spectral.translate(out.amplitudes, back);

  Point twist{};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) twist[i] += rotation[i][j] * psi.twist[j];
  double phase = 0.0;
  for (int a = 0; a < d; ++a) phase -= twist[a] * translation[a];
  out.twist = twist;
  out.global_phase = psi.global_phase + phase;
  fold_twist(out);
  return out;
}

WaveFunction apply_frame(const FrameTransform& frame, const WaveFunction& psi,
                         const ParticleModel& model) {
  frame.validate();
  if (frame.dim != psi.grid.dim())
    throw Error(ErrorKind::InvalidArgument, "frame and wavefunction dims differ");
  return std::visit(
      overloaded{
          [&](const BoostFrame& b) { return boost_wavefunction(psi, model, b.velocity); },
          [&](const EuclideanFrame& e) {
            return euclidean_transform_wavefunction(psi, e.rotation, e.translation);
          },
          [&](const AcceleratedFrame&) -> WaveFunction {
            throw Error(ErrorKind::InvalidArgument,
                        "uniform acceleration applies to classical potentials only");
          },
      },
      frame.kind);
}

Potential accelerated_frame_potential(const Potential& v, const ParticleModel& model,
                                      const Point& a) {
  const int d = model.dim();
  model.validate(d);
  Potential out = v;
  if (max_abs(a, d) == 0.0) return out;
  std::vector<double> g(static_cast<std::size_t>(d));
  double ma2 = 0.0;
  for (int i = 0; i < d; ++i) {
    g[i] = model.mass(i) * a[i];
    ma2 += model.mass(i) * a[i] * a[i];
  }
  out.add(UniformGradientTerm{g, {}});
  out.note("accelerated frame: gradient-free term -" + io::format_double(0.5 * ma2) +
           " t^2 omitted");
  return out;
}

Point fictitious_acceleration(const Potential& v, const Potential& v_prime,
                              const ParticleModel& model, const Point& x, double t) {
  const int d = model.dim();
  const Point g0 = v.gradient(x, d, t);
  const Point g1 = v_prime.gradient(x, d, t);
  Point out{};
  for (int a = 0; a < d; ++a) out[a] = -(g1[a] - g0[a]) / model.mass(a);
  return out;
}

Potential boosted_potential(const Potential& v, const Point& velocity) {
  Potential out;
  for (const auto& term : v.terms()) {
    if (!std::holds_alternative<UniformGradientTerm>(term))
      throw Error(ErrorKind::InvalidArgument,
                  "boosted frames support free and uniform-gradient potentials only");
    out.add(term);
  }
  for (const auto& n : v.notes()) out.note(n);
  if (!v.is_free()) {
    std::string vel;
    for (int a = 0; a < kMaxDim; ++a) vel += (a ? "," : "") + io::format_double(velocity[a]);
    out.note("boosted frame (v = " + vel + "): gradient-free term g(t).v t omitted");
  }
  return out;
}

BoostAuditReport boost_covariance_audit(const WaveFunction& psi0, const Potential& v,
                                        const ParticleModel& model, const Point& velocity,
                                        std::span<const Point> starts, double t_final,
                                        const BoostAuditOptions& opts) {
  psi0.validate();
  const GridSpec& g = psi0.grid;
  const int d = g.dim();
  const Potential vp = boosted_potential(v, velocity);

  const EvolutionRecord record =
      evolve(psi0, v, model, t_final, opts.dt, opts.snapshot_stride, opts.exec);
  const WaveFunction psi0p = boost_wavefunction(psi0, model, velocity);
  const EvolutionRecord recordp =
      evolve(psi0p, vp, model, t_final, opts.dt, opts.snapshot_stride, opts.exec);

  std::vector<Point> starts_p(starts.begin(), starts.end());
  for (auto& x : starts_p)
    for (int a = 0; a < d; ++a) x[a] -= velocity[a] * psi0.time;

  IntegrationOptions iopts = opts.integration;
  const GuidanceField field(record, model, iopts.node_floor_rel, opts.exec);
  const GuidanceField field_p(recordp, model, iopts.node_floor_rel, opts.exec);
  const EnsembleResult ur = integrate_ensemble(field, starts, iopts, opts.exec);
  const EnsembleResult pr = integrate_ensemble(field_p, starts_p, iopts, opts.exec);

  BoostAuditReport report;
  report.velocity = velocity;
  report.t_final = t_final;
  report.starts.assign(starts.begin(), starts.end());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (ur.errors[i]) throw *ur.errors[i];
    if (pr.errors[i]) throw *pr.errors[i];
    Trajectory mapped = *ur.trajectories[i];
    for (std::size_t k = 0; k < mapped.points.size(); ++k)
      for (int a = 0; a < d; ++a) mapped.points[k][a] -= velocity[a] * mapped.times[k];
    const double gap = max_position_gap(mapped, *pr.trajectories[i]);
    report.gaps.push_back(gap);
    report.max_gap = std::max(report.max_gap, gap);
    report.unprimed.push_back(*ur.trajectories[i]);
    report.primed.push_back(*pr.trajectories[i]);
  }
  return report;
}

nlohmann::json to_json(const BoostAuditReport& report) {
  const int d = report.unprimed.empty() ? 1 : report.unprimed.front().dim;
  nlohmann::json starts = nlohmann::json::array();
  for (const auto& s : report.starts) starts.push_back(io::point_json(s, d));
  return {{"velocity", io::point_json(report.velocity, d)},
          {"t_final", report.t_final},
          {"starts", starts},
          {"gaps", report.gaps},
          {"max_gap", report.max_gap}};
}

}  // namespace pwlab
