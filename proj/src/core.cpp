#include "pwlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pwlab/error.hpp"
#include "pwlab/spectral.hpp"

namespace pwlab {

namespace {

constexpr int kMaxCorners = 1 << kMaxDim;

struct Stencil {
  int count = 0;
  std::array<std::size_t, kMaxCorners> index{};
  std::array<double, kMaxCorners> weight{};
  // Per-axis lower node, fractional offset.
  std::array<int, kMaxDim> lower{};
  std::array<double, kMaxDim> frac{};
};

Stencil make_stencil(const GridSpec& grid, const Point& x) {
  Stencil s;
  const int d = grid.dim();
  std::array<int, kMaxDim> upper{};
  for (int a = 0; a < d; ++a) {
    const int n = grid.points(a);
    const double u = (grid.wrap(a, x[a]) - grid.lo(a)) / grid.spacing(a);
    int i0 = static_cast<int>(std::floor(u));
    double f = u - i0;
    if (i0 >= n) i0 -= n;
    if (i0 < 0) i0 += n;
    s.lower[a] = i0;
    s.frac[a] = f;
    upper[a] = (i0 + 1) % n;
  }
  s.count = 1 << d;
  for (int c = 0; c < s.count; ++c) {
    std::size_t flat = 0;
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      const bool hi = (c >> a) & 1;
      flat += grid.stride(a) * static_cast<std::size_t>(hi ? upper[a] : s.lower[a]);
      w *= hi ? s.frac[a] : 1.0 - s.frac[a];
    }
    s.index[c] = flat;
    s.weight[c] = w;
  }
  return s;
}

void check_stencil(const Stencil& s, const std::vector<std::uint8_t>& valid,
                   const Point& x, double t, int dim) {
  if (valid.empty()) return;
  for (int c = 0; c < s.count; ++c)
    if (s.weight[c] > 0.0 && !valid[s.index[c]])
      throw Error(ErrorKind::NodeProximity,
                  "interpolation stencil touches a node-marked grid point", t, x, dim);
}

double interpolate_scalar(const GridSpec& grid, const std::vector<double>& values,
                          const std::vector<std::uint8_t>& valid, const Point& x,
                          double t) {
  const Stencil s = make_stencil(grid, x);
  check_stencil(s, valid, x, t, grid.dim());
  double r = 0.0;
  for (int c = 0; c < s.count; ++c)
    if (s.weight[c] > 0.0) r += s.weight[c] * values[s.index[c]];
  return r;
}

std::vector<Complex> central_difference(const GridSpec& grid, std::span<const Complex> f,
                                        int axis) {
  std::vector<Complex> out(f.size());
  const int n = grid.points(axis);
  const std::size_t stride = grid.stride(axis);
  const double inv = 1.0 / (2.0 * grid.spacing(axis));
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const int i = grid.unflatten(flat)[axis];
    const std::size_t base = flat - static_cast<std::size_t>(i) * stride;
    const std::size_t up = base + static_cast<std::size_t>((i + 1) % n) * stride;
    const std::size_t dn = base + static_cast<std::size_t>((i + n - 1) % n) * stride;
    out[flat] = (f[up] - f[dn]) * inv;
  }
  return out;
}

}  // namespace

DensityField density(const WaveFunction& psi, Execution exec) {
  psi.validate();
  DensityField rho;
  rho.grid = psi.grid;
  rho.time = psi.time;
  rho.values.resize(psi.amplitudes.size());
  kernels::modulus_squared(exec, psi.amplitudes, rho.values);
  rho.probability = std::abs(psi.norm_squared() - 1.0) < 1e-8;
  return rho;
}

double node_floor_for(const WaveFunction& psi, double rel) {
  double mx = 0.0;
  for (const auto& z : psi.amplitudes) mx = std::max(mx, std::norm(z));
  return rel * mx;
}

VelocityField phase_gradient(const WaveFunction& psi, const ParticleModel& model,
                             double node_floor, GradientMethod method, Execution exec) {
  psi.validate();
  model.validate(psi.grid.dim());
  if (!(node_floor > 0.0))
    throw Error(ErrorKind::InvalidArgument, "node_floor must be positive");
  const GridSpec& grid = psi.grid;
  VelocityField v;
  v.grid = grid;
  v.time = psi.time;
  v.valid.resize(grid.size());
  std::vector<double> rho(grid.size());
  kernels::modulus_squared(exec, psi.amplitudes, rho);
  kernels::floor_mask(exec, rho, node_floor, v.valid);

  std::vector<Complex> spectrum;
  Spectral spectral(grid);
  if (method == GradientMethod::spectral) {
    spectrum = psi.amplitudes;
    spectral.forward(spectrum);
  }
  for (int a = 0; a < grid.dim(); ++a) {
    const auto dpsi = method == GradientMethod::spectral
                          ? spectral.derivative_from_spectrum(spectrum, a, 1)
                          : central_difference(grid, psi.amplitudes, a);
    v.components[a].resize(grid.size());
    kernels::guidance_velocity(exec, psi.amplitudes, dpsi, psi.twist[a], model.mass(a),
                               v.valid, v.components[a]);
  }
  return v;
}

VelocityField phase_gradient(const WaveFunction& psi, const ParticleModel& model) {
  return phase_gradient(psi, model, node_floor_for(psi));
}

VectorField probability_current(const WaveFunction& psi, const ParticleModel& model,
                                Execution exec) {
  psi.validate();
  model.validate(psi.grid.dim());
  const GridSpec& grid = psi.grid;
  VectorField j;
  j.grid = grid;
  j.time = psi.time;
  Spectral spectral(grid);
  auto spectrum = psi.amplitudes;
  spectral.forward(spectrum);
  std::vector<Complex> current(grid.size());
  for (int a = 0; a < grid.dim(); ++a) {
    const auto dpsi = spectral.derivative_from_spectrum(spectrum, a, 1);
    kernels::probability_current(exec, psi.amplitudes, dpsi, psi.twist[a], model.mass(a),
                                 current);
    j.components[a].resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) j.components[a][i] = current[i].real();
  }
  return j;
}

Point interpolate(const VectorField& field, const Point& x) {
  const Stencil s = make_stencil(field.grid, x);
  check_stencil(s, field.valid, x, field.time, field.grid.dim());
  Point r{};
  for (int a = 0; a < field.grid.dim(); ++a) {
    const auto& comp = field.components[a];
    double acc = 0.0;
    for (int c = 0; c < s.count; ++c)
      if (s.weight[c] > 0.0) acc += s.weight[c] * comp[s.index[c]];
    r[a] = acc;
  }
  return r;
}

double interpolate(const DensityField& field, const Point& x) {
  return interpolate_scalar(field.grid, field.values, {}, x, field.time);
}

double interpolate(const QuantumPotentialField& field, const Point& x) {
  return interpolate_scalar(field.grid, field.values, field.valid, x, field.time);
}

Point interpolate_gradient(const GridSpec& grid, std::span<const double> values,
                           const Point& x) {
  const Stencil s = make_stencil(grid, x);
  const int d = grid.dim();
  Point g{};
  for (int b = 0; b < d; ++b) {
    double acc = 0.0;
    for (int c = 0; c < s.count; ++c) {
      double w = 1.0;
      for (int a = 0; a < d; ++a) {
        const bool hi = (c >> a) & 1;
        if (a == b)
          w *= (hi ? 1.0 : -1.0) / grid.spacing(a);
        else
          w *= hi ? s.frac[a] : 1.0 - s.frac[a];
      }
      acc += w * values[s.index[c]];
    }
    g[b] = acc;
  }
  return g;
}

std::vector<Point> sample_density(const DensityField& density, std::size_t n,
                                  std::uint64_t seed, SamplingScheme scheme) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sample count must be >= 1");
  const GridSpec& grid = density.grid;
  std::vector<double> cumulative(density.values.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < density.values.size(); ++i) {
    const double v = density.values[i];
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::InvalidArgument, "density must be finite and nonnegative");
    acc += v;
    cumulative[i] = acc;
  }
  if (!(acc * grid.cell_volume() >= 1e-12))
    throw Error(ErrorKind::DegenerateDensity, "density has (almost) no mass");

  const int d = grid.dim();
  const int fast = d - 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<Point> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = scheme == SamplingScheme::stratified
                         ? (static_cast<double>(i) + uniform(rng)) / static_cast<double>(n)
                         : uniform(rng);
    const double target = std::min(u * acc, std::nextafter(acc, 0.0));
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto cell = static_cast<std::size_t>(it - cumulative.begin());
    const double below = cell == 0 ? 0.0 : cumulative[cell - 1];
    double frac = (target - below) / density.values[cell];
    frac = std::clamp(frac, 0.0, std::nextafter(1.0, 0.0));
    Point p = grid.node(cell);
    for (int a = 0; a < fast; ++a) p[a] += (uniform(rng) - 0.5) * grid.spacing(a);
    p[fast] += (frac - 0.5) * grid.spacing(fast);
    out[i] = p;
  }
  return out;
}

std::vector<double> ks_distance_per_axis(std::span<const Point> points,
                                         std::span<const double> weights,
                                         const DensityField& density) {
  const GridSpec& grid = density.grid;
  const int d = grid.dim();
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "KS needs at least one point");
  if (!weights.empty() && weights.size() != points.size())
    throw Error(ErrorKind::InvalidArgument, "weights must match points");
  double wsum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) wsum += weights.empty() ? 1.0 : weights[i];

  std::vector<double> result(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const int n = grid.points(a);
    const double dx = grid.spacing(a);
    std::vector<double> marginal(static_cast<std::size_t>(n), 0.0);
    for (std::size_t flat = 0; flat < density.values.size(); ++flat)
      marginal[grid.unflatten(flat)[a]] += density.values[flat];
    std::vector<double> below(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 0; j < n; ++j) below[j + 1] = below[j] + marginal[j];
    const double total = below[n];
    // Cells centred on nodes: cell j spans [origin + j dx, origin + (j + 1) dx).
    const double origin = grid.lo(a) - 0.5 * dx;
    const double len = grid.length(a);
    auto cdf = [&](double x) {
      const double u = (x - origin) / dx;
      int j = static_cast<int>(std::floor(u));
      j = std::clamp(j, 0, n - 1);
      const double f = std::clamp(u - j, 0.0, 1.0);
      return (below[j] + f * marginal[j]) / total;
    };

    std::vector<std::pair<double, double>> sorted(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      double r = std::fmod(points[i][a] - origin, len);
      if (r < 0) r += len;
      sorted[i] = {origin + r, (weights.empty() ? 1.0 : weights[i]) / wsum};
    }
    std::sort(sorted.begin(), sorted.end());
    double ecdf = 0.0;
    double worst = 0.0;
    for (const auto& [x, w] : sorted) {
      const double f = cdf(x);
      worst = std::max(worst, std::abs(f - ecdf));
      ecdf += w;
      worst = std::max(worst, std::abs(f - ecdf));
    }
    result[a] = worst;
  }
  return result;
}

}  // namespace pwlab
