#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pwlab/error.hpp"
#include "pwlab/frames.hpp"

using namespace pwlab;

namespace {

const ParticleModel kUnit = ParticleModel::uniform(1, 1.0);

double density_gap(const WaveFunction& a, const WaveFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i)
    m = std::max(m, std::abs(std::norm(a.value(i)) - std::norm(b.value(i))));
  return m;
}

double velocity_gap(const WaveFunction& a, const WaveFunction& b, const ParticleModel& m) {
  const auto va = phase_gradient(a, m, node_floor_for(a, 1e-8));
  const auto vb = phase_gradient(b, m, node_floor_for(b, 1e-8));
  double worst = 0.0;
  for (int d = 0; d < a.grid.dim(); ++d)
    for (std::size_t i = 0; i < a.grid.size(); ++i)
      if (va.valid[i] && vb.valid[i])
        worst = std::max(worst, std::abs(va.components[d][i] - vb.components[d][i]));
  return worst;
}

double covariance(const WaveFunction& psi, int a, int b) {
  const auto rho = density(psi);
  const double ma = density_mean(psi, a), mb = density_mean(psi, b);
  double s = 0.0;
  for (std::size_t i = 0; i < rho.values.size(); ++i) {
    const Point x = psi.grid.node(i);
    s += rho.values[i] * (x[a] - ma) * (x[b] - mb);
  }
  return s * psi.grid.cell_volume();
}

WaveFunction at_time(WaveFunction psi, double t) {
  psi.time = t;
  return psi;
}

}  // namespace

TEST_CASE("identity boost") {
  const GridSpec g({256}, {-20.0}, {20.0});
  const auto psi = at_time(gaussian_packet(g, {0.5}, {0.3}, {1.0}), 0.7);
  CHECK(max_abs_difference(boost_wavefunction(psi, kUnit, {0.0}), psi) < 1e-12);
  CHECK(check_phase_gradient_shift(psi, kUnit, {0.0}) < 1e-12);
}

TEST_CASE("boosted plane wave has shifted momentum") {
  const GridSpec g({128}, {0.0}, {10.0});
  const ParticleModel m{{1.5}, {}};
  const auto psi = at_time(plane_wave(g, {1.1}), 0.4);
  const auto b = boost_wavefunction(psi, m, {0.3});
  const auto v = phase_gradient(b, m);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(m.mass(0) * v.components[0][i] == doctest::Approx(1.1 - 1.5 * 0.3).epsilon(1e-12));
  CHECK(check_phase_gradient_shift(psi, m, {0.3}) < 1e-10);
  CHECK(check_phase_gradient_shift(psi, m, {-2.9}) < 1e-10);
}

TEST_CASE("boost matches the transformation law pointwise") {
  // Psi'(x', t) = Psi(x' + v t, t) exp(i(m v^2 t / 2 - m v (x' + v t))).
  const GridSpec g({512}, {-20.0}, {20.0});
  const double t = 0.8, v = 0.6;
  const auto psi = at_time(gaussian_packet(g, {0.0}, {0.4}, {1.0}), t);
  const auto b = boost_wavefunction(psi, kUnit, {v});
  const auto shifted = at_time(gaussian_packet(g, {-v * t}, {0.4}, {1.0}), t);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xp = g.node(i)[0];
    // gaussian_packet at center -vt reproduces exp(i p x) at x', so the phase
    // from the original p x uses x' + v t.
    const Complex expect = shifted.value(i) * std::polar(1.0, 0.4 * v * t) *
                           std::polar(1.0, 0.5 * v * v * t - v * (xp + v * t));
    worst = std::max(worst, std::abs(b.value(i) - expect));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("boost inverse and composition") {
  const GridSpec g({512}, {-20.0}, {20.0});
  const ParticleModel m{{1.3}, {}};
  const auto psi = at_time(gaussian_packet(g, {0.2}, {0.5}, {1.0}), 1.1);
  const auto back = boost_wavefunction(boost_wavefunction(psi, m, {0.45}), m, {-0.45});
  CHECK(max_abs_difference(back, psi) < 1e-9);
  const auto two = boost_wavefunction(boost_wavefunction(psi, m, {0.3}), m, {0.5});
  const auto one = boost_wavefunction(psi, m, {0.8});
  CHECK(density_gap(two, one) < 1e-9);
  CHECK(velocity_gap(two, one, m) < 1e-8);
  CHECK(std::abs(two.norm_squared() - 1.0) < 1e-10);
}

TEST_CASE("large boosts wrap the support") {
  const GridSpec g({64}, {-5.0}, {5.0});
  const auto psi = at_time(gaussian_packet(g, {0.0}, {0.0}, {0.7}), 2.0);
  try {
    boost_wavefunction(psi, kUnit, {3.0});
    FAIL("expected SupportWrap");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SupportWrap);
  }
}

TEST_CASE("phase-gradient shift on an evolved Gaussian") {
  const GridSpec g({1024}, {-20.0}, {20.0});
  const auto rec = evolve(gaussian_packet(g, {0.0}, {0.0}, {1.0}), Potential::free(), kUnit, 0.5);
  CHECK(check_phase_gradient_shift(rec.snapshots.back(), kUnit, {0.7}) < 1e-6);
}

TEST_CASE("boost covariance audit") {
  const GridSpec g({1024}, {-20.0}, {20.0});
  const auto psi0 = gaussian_packet(g, {0.0}, {0.0}, {1.0});
  std::vector<Point> starts;
  for (int i = 0; i < 6; ++i) starts.push_back({-1.5 + 0.6 * i});
  const auto still = boost_covariance_audit(psi0, Potential::free(), kUnit, {0.0}, starts, 1.0);
  CHECK(still.max_gap < 1e-8);
  const auto moving = boost_covariance_audit(psi0, Potential::free(), kUnit, {0.5}, starts, 1.0);
  CHECK(moving.max_gap < 1e-4);
  CHECK(moving.gaps.size() == starts.size());
  const auto j = to_json(moving);
  CHECK(j.contains("max_gap"));

  const GridSpec pg({64}, {0.0}, {10.0});
  const std::vector<Point> ps{{2.0}, {7.5}};
  const auto plane = boost_covariance_audit(plane_wave(pg, {0.9}), Potential::free(), kUnit, {0.4}, ps, 1.0);
  CHECK(plane.max_gap < 1e-8);

  CHECK_THROWS_AS(boost_covariance_audit(psi0, Potential::harmonic({1.0}), kUnit, {0.5}, starts, 1.0),
                  Error);
}

TEST_CASE("euclidean transforms") {
  const GridSpec g({128, 128}, {-16.0, -16.0}, {16.0, 16.0});
  const auto psi = gaussian_packet(g, {0.5, -0.3}, {0.4, 0.0}, {0.8, 1.4});
  CHECK(max_abs_difference(euclidean_transform_wavefunction(psi, identity_matrix(), {}), psi) == 0.0);

  const auto moved = euclidean_transform_wavefunction(psi, identity_matrix(), {1.25, -0.5});
  CHECK(density_mean(moved, 0) == doctest::Approx(1.75).epsilon(1e-8));
  CHECK(density_mean(moved, 1) == doctest::Approx(-0.8).epsilon(1e-8));

  const auto turned = euclidean_transform_wavefunction(psi, plane_rotation(0, 1, 0.5 * std::numbers::pi), {});
  CHECK(covariance(turned, 0, 0) == doctest::Approx(1.96).epsilon(1e-6));
  CHECK(covariance(turned, 1, 1) == doctest::Approx(0.64).epsilon(1e-6));
  CHECK(std::abs(turned.norm_squared() - 1.0) < 1e-9);
  CHECK(density_mean(turned, 0) == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(density_mean(turned, 1) == doctest::Approx(0.5).epsilon(1e-8));

  // Pullback of a rotated packet equals the packet built rotated.
  const double th = 0.6;
  const auto iso = gaussian_packet(g, {1.0, 0.0}, {0.0, 0.0}, {0.9, 0.9});
  const auto r = euclidean_transform_wavefunction(iso, plane_rotation(0, 1, th), {});
  const auto direct = gaussian_packet(g, {std::cos(th), std::sin(th)}, {0.0, 0.0}, {0.9, 0.9});
  CHECK(max_abs_difference(r, direct) < 1e-9);

  Matrix bad = identity_matrix();
  bad[0][0] = 2.0;
  CHECK_THROWS_AS(euclidean_transform_wavefunction(psi, bad, {}), Error);
  CHECK_THROWS_AS(euclidean_transform_wavefunction(psi, identity_matrix(), {17.0, 0.0}), Error);
}

TEST_CASE("rotations compose in 3D") {
  const GridSpec g({64, 64, 64}, {-14.0, -14.0, -14.0}, {14.0, 14.0, 14.0});
  const auto psi = gaussian_packet(g, {0.5, 0.0, -0.4}, {0.0, 0.0, 0.0}, {0.9, 1.0, 1.1});
  const Matrix a = plane_rotation(0, 2, 0.4);
  const Matrix b = plane_rotation(1, 2, -0.3);
  Matrix ab{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) ab[i][j] += a[i][k] * b[k][j];
  const auto stepwise = euclidean_transform_wavefunction(euclidean_transform_wavefunction(psi, b, {}), a, {});
  const auto combined = euclidean_transform_wavefunction(psi, ab, {});
  CHECK(max_abs_difference(stepwise, combined) < 1e-6);
}

TEST_CASE("frame transforms dispatch by kind") {
  const GridSpec g({64}, {-10.0}, {10.0});
  const auto psi = at_time(gaussian_packet(g, {0.0}, {0.0}, {1.0}), 0.5);
  FrameTransform boost{1, BoostFrame{{0.2}}};
  CHECK(boost.acts_on_wavefunctions());
  CHECK(max_abs_difference(apply_frame(boost, psi, kUnit), boost_wavefunction(psi, kUnit, {0.2})) == 0.0);
  FrameTransform accel{1, AcceleratedFrame{{1.0}}};
  CHECK_FALSE(accel.acts_on_wavefunctions());
  CHECK_THROWS_AS(apply_frame(accel, psi, kUnit), Error);
  FrameTransform skew{2, EuclideanFrame{}};
  std::get<EuclideanFrame>(skew.kind).rotation[0][1] = 0.1;
  CHECK_THROWS_AS(skew.validate(), Error);
}

TEST_CASE("fictitious acceleration is universal") {
  const Point a{0.4, -1.1};
  const Potential base = Potential::harmonic({1.0, 3.0});
  for (const auto& masses : {std::vector<double>{1.0, 1.0}, std::vector<double>{0.3, 4.2}}) {
    const ParticleModel m{masses, {}};
    const Potential vp = accelerated_frame_potential(base, m, a);
    CHECK_FALSE(vp.notes().empty());
    for (const Point& x : {Point{0.0, 0.0}, Point{2.0, -1.0}}) {
      const Point f = fictitious_acceleration(base, vp, m, x, 1.3);
      CHECK(std::abs(f[0] + a[0]) < 1e-12);
      CHECK(std::abs(f[1] + a[1]) < 1e-12);
    }
  }
  const auto same = accelerated_frame_potential(base, ParticleModel::uniform(2, 1.0), {0.0, 0.0});
  CHECK(same.terms().size() == base.terms().size());
}

TEST_CASE("boosted potentials") {
  const Potential g = Potential::uniform_gradient({0.5});
  CHECK_NOTHROW(boosted_potential(g, {1.0}));
  CHECK_NOTHROW(boosted_potential(Potential::free(), {1.0}));
  CHECK_THROWS_AS(boosted_potential(Potential::harmonic({1.0}), {1.0}), Error);
}
