#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pwlab/core.hpp"
#include "pwlab/error.hpp"
#include "pwlab/schrodinger.hpp"

using namespace pwlab;

namespace {

const ParticleModel kUnit = ParticleModel::uniform(1, 1.0);

double max_gap_to(const WaveFunction& psi, auto f) {
  // Compares up to a global phase fixed at the density peak.
  std::size_t peak = 0;
  for (std::size_t i = 0; i < psi.grid.size(); ++i)
    if (std::abs(psi.value(i)) > std::abs(psi.value(peak))) peak = i;
  const Complex align = std::polar(1.0, std::arg(f(psi.grid.node(peak)[0])) - std::arg(psi.value(peak)));
  double m = 0.0;
  for (std::size_t i = 0; i < psi.grid.size(); ++i)
    m = std::max(m, std::abs(psi.value(i) * align - f(psi.grid.node(i)[0])));
  return m;
}

double norm_of(const GridSpec& g, auto f) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += std::norm(f(g.node(i)[0]));
  return std::sqrt(s * g.cell_volume());
}

}  // namespace

TEST_CASE("free Gaussian evolution matches the closed form") {
  const GridSpec g({1024}, {-20.0}, {20.0});
  const double c = -1.0, p = 0.8, s = 1.0;
  const auto rec = evolve(gaussian_packet(g, {c}, {p}, {s}), Potential::free(), kUnit, 1.0);
  const double n = norm_of(g, [&](double x) { return oracle::free_gaussian(x, 1.0, c, p, s, 1.0); });
  auto exact = [&](double x) { return oracle::free_gaussian(x, 1.0, c, p, s, 1.0) / n; };
  CHECK(max_gap_to(rec.snapshots.back(), exact) < 1e-8);
  // The library's own closed form agrees with the test oracle.
  CHECK(max_gap_to(analytic_free_gaussian(g, {c}, {p}, {s}, kUnit, 1.0), exact) < 1e-12);
  CHECK(max_abs_difference(rec.snapshots.back(),
                           analytic_free_gaussian(g, {c}, {p}, {s}, kUnit, 1.0)) < 1e-8);
}

TEST_CASE("free Gaussian width and centroid") {
  const GridSpec g({1024}, {-20.0}, {20.0});
  const auto rec = evolve(gaussian_packet(g, {0.0}, {0.0}, {1.0}), Potential::free(), kUnit, 1.0);
  CHECK(std::sqrt(density_variance(rec.snapshots.back(), 0)) ==
        doctest::Approx(std::sqrt(1.25)).epsilon(1e-6));
  const auto moved = analytic_free_gaussian(g, {0.5}, {1.2}, {1.0}, ParticleModel{{2.0}, {}}, 1.5);
  CHECK(density_mean(moved, 0) == doctest::Approx(0.5 + 0.6 * 1.5).epsilon(1e-8));
  CHECK(density_variance(moved, 0) ==
        doctest::Approx(1.0 + 1.5 * 1.5 / 16.0).epsilon(1e-8));
  CHECK(max_abs_difference(analytic_free_gaussian(g, {0.5}, {1.2}, {1.0}, kUnit, 0.0),
                           gaussian_packet(g, {0.5}, {1.2}, {1.0})) < 1e-12);
}

TEST_CASE("packet construction") {
  const GridSpec g({512}, {-20.0}, {20.0});
  const auto psi = gaussian_packet(g, {0.0}, {0.0}, {1.0});
  for (const auto& z : psi.amplitudes) {
    CHECK(z.imag() == 0.0);
    CHECK(z.real() >= 0.0);
  }
  CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_packet(g, {18.0}, {0.0}, {1.0}), Error);
  CHECK_THROWS_AS(gaussian_packet(g, {0.0}, {0.0}, {0.0}), Error);
}

TEST_CASE("plane-wave modes pick up the exact kinetic phase") {
  const GridSpec g({64}, {0.0}, {2.0 * std::numbers::pi});
  const auto psi = plane_wave(g, {3.0});
  const auto next = step_splitstep(psi, Potential::free(), kUnit, 0.01);
  const Complex expect = std::polar(1.0, -9.0 * 0.01 / 2.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(next.value(i) - expect * psi.value(i)) < 1e-13);
}

TEST_CASE("off-grid plane waves are represented exactly") {
  const GridSpec g({64}, {0.0}, {10.0});
  const auto psi = plane_wave(g, {1.2345});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.node(i)[0];
    CHECK(std::abs(psi.value(i) - std::polar(1.0 / std::sqrt(10.0), 1.2345 * x)) < 1e-13);
  }
}

TEST_CASE("harmonic ground state is stationary") {
  const GridSpec g({256}, {-12.0}, {12.0});
  const std::vector<double> k{2.0};
  const ParticleModel m{{0.5}, {}};
  const auto ground = harmonic_ground_state(g, k, m);
  const double e0 = harmonic_ground_energy(k, m);
  CHECK(e0 == doctest::Approx(0.5 * std::sqrt(4.0)));
  CHECK(energy(ground, Potential::harmonic(k), m) == doctest::Approx(e0).epsilon(1e-10));

  const double dt = 1e-3;
  const auto next = step_splitstep(ground, Potential::harmonic(k), m, dt);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(next.value(i) - std::polar(1.0, -e0 * dt) * ground.value(i)) < 1e-8);

  const auto rec = evolve(ground, Potential::harmonic(k), m, 2.0, dt, 500);
  const auto rho0 = density(ground);
  double drift = 0.0;
  for (const auto& s : rec.snapshots) {
    const auto rho = density(s);
    for (std::size_t i = 0; i < g.size(); ++i)
      drift = std::max(drift, std::abs(rho.values[i] - rho0.values[i]));
  }
  CHECK(drift < 1e-6);
}

TEST_CASE("unitarity and energy conservation") {
  const GridSpec g({256}, {-16.0}, {16.0});
  const Potential v = Potential::harmonic({1.0});
  const auto psi0 = gaussian_packet(g, {1.0}, {0.5}, {0.8});
  SplitStepPropagator prop(g, v, kUnit, 1e-3);
  WaveFunction psi = psi0;
  const double e0 = energy(psi0, v, kUnit);
  double worst_step = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double before = psi.norm_squared();
    prop.step(psi);
    worst_step = std::max(worst_step, std::abs(psi.norm_squared() - before));
  }
  CHECK(worst_step < 1e-12);
  CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-10);
  CHECK(std::abs(energy(psi, v, kUnit) - e0) / e0 < 1e-6);
}

TEST_CASE("second-order convergence against the coherent state") {
  // The free packet is propagated exactly by the kinetic step, so the order
  // is measured where the splitting actually errs.
  const GridSpec g({256}, {-12.0}, {12.0});
  const std::vector<double> k{1.0};
  const double x0 = 1.5, t = 1.0;
  const auto psi0 = harmonic_coherent_state(g, k, kUnit, {x0}, 0.0);
  auto error = [&](double dt) {
    const auto rec = evolve(psi0, Potential::harmonic(k), kUnit, t, dt, 100000);
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      m = std::max(m, std::abs(rec.snapshots.back().value(i) -
                               oracle::coherent(g.node(i)[0], t, x0, 1.0, 1.0)));
    return m;
  };
  const double e1 = error(1e-2), e2 = error(5e-3), e3 = error(2.5e-3);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
  CHECK(e2 / e3 >= 3.5);
  CHECK(e2 / e3 <= 4.5);
  CHECK(max_abs_difference(harmonic_coherent_state(g, k, kUnit, {x0}, t), evolve(psi0, Potential::harmonic(k), kUnit, t, 1e-4, 100000).snapshots.back()) < 1e-6);
}

TEST_CASE("forward then backward returns the initial state") {
  const GridSpec g({512}, {-20.0}, {20.0});
  const Potential v = Potential::gaussian_barrier(3.0, 0.7, {0.4});
  const auto psi0 = gaussian_packet(g, {-3.0}, {1.5}, {1.0});
  SplitStepPropagator fwd(g, v, kUnit, 1e-3), bwd(g, v, kUnit, -1e-3);
  WaveFunction psi = psi0;
  for (int i = 0; i < 1500; ++i) fwd.step(psi);
  CHECK(max_abs_difference(psi, psi0) > 0.1);
  for (int i = 0; i < 1500; ++i) bwd.step(psi);
  CHECK(max_abs_difference(psi, psi0) < 1e-8);
}

TEST_CASE("evolve scheduling") {
  const GridSpec g({64}, {-10.0}, {10.0});
  const auto psi0 = gaussian_packet(g, {0.0}, {0.0}, {1.0});
  const auto empty = evolve(psi0, Potential::free(), kUnit, 0.0);
  CHECK(empty.snapshots.size() == 1);
  const auto rec = evolve(psi0, Potential::free(), kUnit, 0.025, 1e-3, 10);
  REQUIRE(rec.snapshots.size() == 4);
  CHECK(rec.snapshots[1].time == doctest::Approx(0.01));
  CHECK(rec.snapshots.back().time == doctest::Approx(0.025));
  CHECK(rec.scheme == std::string(kStrangScheme));
  CHECK_THROWS_AS(evolve(psi0, Potential::free(), kUnit, 0.0105, 1e-3), Error);
  CHECK_THROWS_AS(evolve(psi0, Potential::free(), kUnit, 1.0, 1e-3, 0), Error);
  CHECK_THROWS_AS(evolve(psi0, Potential::free(), kUnit, -1.0), Error);
}

TEST_CASE("non-finite potentials are reported") {
  const GridSpec g({64}, {-10.0}, {10.0});
  DensityField table;
  table.grid = g;
  table.values.assign(g.size(), 0.0);
  table.values[5] = std::numeric_limits<double>::infinity();
  const auto psi0 = gaussian_packet(g, {0.0}, {0.0}, {1.0});
  CHECK_THROWS_AS(step_splitstep(psi0, Potential::table(table), kUnit, 1e-3), Error);
}

TEST_CASE("time-dependent potentials are sampled per step") {
  const GridSpec g({128}, {-16.0}, {16.0});
  const auto psi0 = gaussian_packet(g, {0.0}, {0.0}, {1.0});
  // Force -g_rate t: momentum -g_rate t^2 / 2, mean -g_rate t^3 / 6.
  const auto rec = evolve(psi0, Potential::uniform_gradient({0.0}, {0.6}), kUnit, 1.0, 1e-3, 1000);
  CHECK(density_mean(rec.snapshots.back(), 0) == doctest::Approx(-0.1).epsilon(1e-5));
}
