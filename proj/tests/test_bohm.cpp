#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pwlab/bohm.hpp"
#include "pwlab/classical.hpp"

using namespace pwlab;

namespace {

const ParticleModel kUnit = ParticleModel::uniform(1, 1.0);

}  // namespace

TEST_CASE("quantum potential of a Gaussian amplitude") {
  const GridSpec g({512}, {-20.0}, {20.0});
  const double s = 1.2;
  const ParticleModel m{{1.5}, {}};
  const auto psi = gaussian_packet(g, {0.0}, {0.9}, {s});
  const auto q = quantum_potential(psi, m, node_floor_for(psi, 1e-8));
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (q.valid[i])
      worst = std::max(worst, std::abs(q.values[i] - oracle::gaussian_q(g.node(i)[0], s, 1.5)));
  CHECK(worst < 1e-6);

  const auto f = quantum_force(psi, m, node_floor_for(psi, 1e-8));
  double fworst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (f.valid[i]) {
      const double x = g.node(i)[0];
      fworst = std::max(fworst, std::abs(f.components[0][i] - x / (4.0 * 1.5 * s * s * s * s)));
    }
  CHECK(fworst < 1e-6);
}

TEST_CASE("plane waves have no quantum potential") {
  const GridSpec g({64}, {0.0}, {10.0});
  const auto psi = plane_wave(g, {0.77});
  const auto q = quantum_potential(psi, kUnit, node_floor_for(psi));
  for (double v : q.values) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("ground state balances V + Q") {
  const GridSpec g({256}, {-12.0}, {12.0});
  const std::vector<double> k{2.0};
  const ParticleModel m{{0.5}, {}};
  const auto psi = harmonic_ground_state(g, k, m);
  const auto q = quantum_potential(psi, m, node_floor_for(psi, 1e-8));
  const double e0 = harmonic_ground_energy(k, m);
  const Potential v = Potential::harmonic(k);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (q.valid[i]) CHECK(std::abs(q.values[i] + v.value(g.node(i), 1, 0.0) - e0) < 1e-6);
}

TEST_CASE("quantum potential ignores constant factors") {
  const GridSpec g({256}, {-20.0}, {20.0});
  const auto psi = gaussian_packet(g, {0.3}, {0.5}, {1.0});
  auto scaled = psi;
  for (auto& z : scaled.amplitudes) z *= Complex(-0.3, 2.1);
  const double floor = node_floor_for(psi);
  const auto a = quantum_potential(psi, kUnit, floor);
  const auto b = quantum_potential(scaled, kUnit, floor * std::norm(Complex(-0.3, 2.1)));
  // Roundoff is amplified by 1/|psi| in the tails; weight by relative amplitude.
  double peak = 0.0;
  for (const auto& z : psi.amplitudes) peak = std::max(peak, std::abs(z));
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (a.valid[i] && b.valid[i])
      worst = std::max(worst, std::abs(a.values[i] - b.values[i]) * std::abs(psi.amplitudes[i]) / peak);
  CHECK(worst < 1e-12);
}

TEST_CASE("second-order ground-state particles stay at rest") {
  const GridSpec g({256}, {-12.0}, {12.0});
  const std::vector<double> k{1.0};
  const Potential v = Potential::harmonic(k);
  const auto rec = evolve(harmonic_ground_state(g, k, kUnit), v, kUnit, 2.0, 1e-3, 20);
  for (double x0 : {-1.0, 0.4, 1.8}) {
    const auto t = integrate_second_order(rec, v, kUnit, {x0}, {0.0});
    CHECK(t.scheme == "second-order");
    CHECK(t.has_velocities());
    for (const auto& p : t.points) CHECK(std::abs(p[0] - x0) < 1e-5);
  }
}

TEST_CASE("first and second order agree when the momenta match") {
  const GridSpec g({1024}, {-20.0}, {20.0});
  const auto rec = evolve(gaussian_packet(g, {0.0}, {0.0}, {1.0}), Potential::free(), kUnit, 1.0);
  for (double x0 : {-1.2, 0.5}) {
    const auto r = compare_first_second_order(rec, kUnit, {x0}, {0.0});
    CHECK(r.v0[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r.position_gap < 1e-4);
    CHECK(r.velocity_constraint_gap < 1e-4);
    const auto off = compare_first_second_order(rec, kUnit, {x0}, {1.0});
    CHECK(off.position_gap > 1e-2);
    CHECK(off.velocity_constraint_gap > 1e-2);
  }
}

TEST_CASE("equivalence gap shrinks under refinement") {
  const GridSpec g({1024}, {-20.0}, {20.0});
  const auto psi0 = gaussian_packet(g, {0.0}, {0.6}, {1.0});
  auto gap = [&](double dt) {
    const auto rec = evolve(psi0, Potential::free(), kUnit, 1.0, dt, 10);
    IntegrationOptions opts;
    opts.dt = dt;
    return compare_first_second_order(rec, kUnit, {0.8}, {0.0}, opts).position_gap;
  };
  CHECK(gap(5e-4) < gap(1e-3));
}
