#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pwlab/error.hpp"
#include "pwlab/guidance.hpp"

using namespace pwlab;

namespace {

const ParticleModel kUnit = ParticleModel::uniform(1, 1.0);

// A record whose snapshots are the same state at different times.
EvolutionRecord frozen(const WaveFunction& psi, int count, double spacing,
                       double phase_rate = 0.0) {
  EvolutionRecord rec;
  rec.dt = spacing;
  for (int i = 0; i < count; ++i) {
    WaveFunction s = psi;
    s.time = i * spacing;
    s.global_phase = -phase_rate * s.time;
    rec.snapshots.push_back(s);
  }
  return rec;
}

EvolutionRecord free_gaussian_record(double p = 0.0) {
  const GridSpec g({1024}, {-20.0}, {20.0});
  return evolve(gaussian_packet(g, {0.0}, {p}, {1.0}), Potential::free(), kUnit, 1.0, 1e-3, 10);
}

}  // namespace

TEST_CASE("real stationary states keep particles at rest") {
  const GridSpec g({256}, {-12.0}, {12.0});
  const std::vector<double> k{1.0};
  const auto rec = frozen(harmonic_ground_state(g, k, kUnit), 51, 0.1,
                          harmonic_ground_energy(k, kUnit));
  for (double x0 : {-1.7, 0.0, 0.3, 2.2}) {
    const auto t = integrate_guidance(rec, kUnit, {x0});
    CHECK(t.times.back() == doctest::Approx(5.0));
    for (const auto& p : t.points) CHECK(std::abs(p[0] - x0) < 1e-10);
  }
}

TEST_CASE("plane-wave trajectories move uniformly") {
  const GridSpec g({64}, {0.0}, {10.0});
  const auto rec = frozen(plane_wave(g, {1.1}), 11, 0.1);
  const ParticleModel m{{2.0}, {}};
  const auto t = integrate_guidance(rec, m, {3.0});
  for (std::size_t i = 0; i < t.times.size(); ++i)
    CHECK(std::abs(t.points[i][0] - (3.0 + 0.55 * t.times[i])) < 1e-8);
}

TEST_CASE("free Gaussian trajectories follow the analytic flow") {
  const auto rec = free_gaussian_record();
  for (double x0 : {-2.0, -0.5, 0.25, 1.5}) {
    const auto t = integrate_guidance(rec, kUnit, {x0});
    for (std::size_t i = 0; i < t.times.size(); ++i)
      CHECK(std::abs(t.points[i][0] - oracle::free_gaussian_path(x0, t.times[i], 1.0, 1.0)) < 1e-5);
  }
}

TEST_CASE("1D trajectories never cross") {
  const auto rec = free_gaussian_record(0.7);
  std::vector<Point> starts;
  for (int i = 0; i < 25; ++i) starts.push_back({-2.5 + 0.2 * i});
  const auto r = integrate_ensemble(rec, kUnit, starts);
  REQUIRE(r.failures() == 0);
  for (std::size_t i = 1; i < starts.size(); ++i) {
    const auto& a = *r.trajectories[i - 1];
    const auto& b = *r.trajectories[i];
    REQUIRE(a.times.size() == b.times.size());
    for (std::size_t k = 0; k < a.times.size(); ++k) CHECK(a.points[k][0] < b.points[k][0]);
  }
}

TEST_CASE("step halving barely moves endpoints") {
  const auto rec = free_gaussian_record(0.4);
  IntegrationOptions coarse, fine;
  fine.dt = 5e-4;
  for (double x0 : {-1.0, 0.6}) {
    const auto a = integrate_guidance(rec, kUnit, {x0}, coarse);
    const auto b = integrate_guidance(rec, kUnit, {x0}, fine);
    CHECK(std::abs(a.points.back()[0] - b.points.back()[0]) < 1e-6);
  }
}

TEST_CASE("mass consistency on a frozen state") {
  // v = grad S / m: doubling m and stretching time by two retraces the path.
  const GridSpec g({512}, {-20.0}, {20.0});
  const auto psi = gaussian_packet(g, {0.0}, {0.8}, {1.0});
  const auto rec = frozen(psi, 41, 0.05);
  IntegrationOptions oa, ob;
  oa.dt = 1e-3;
  oa.t_end = 1.0;
  ob.dt = 2e-3;
  const auto a = integrate_guidance(rec, kUnit, {0.3}, oa);
  const auto b = integrate_guidance(rec, kUnit.scaled(2.0), {0.3}, ob);
  REQUIRE(b.times.back() == doctest::Approx(2.0));
  for (std::size_t i = 0; i < a.times.size(); i += 50) {
    const double t = a.times[i];
    std::size_t j = 0;
    while (j < b.times.size() && std::abs(b.times[j] - 2.0 * t) > 1e-9) ++j;
    REQUIRE(j < b.times.size());
    CHECK(std::abs(a.points[i][0] - b.points[j][0]) < 1e-10);
  }
}

TEST_CASE("ensemble results are deterministic and ordered") {
  const auto rec = free_gaussian_record(0.3);
  CHECK(integrate_ensemble(rec, kUnit, std::vector<Point>{}).trajectories.empty());
  const std::vector<Point> starts{{0.5}, {-1.0}, {0.5}};
  const auto r = integrate_ensemble(rec, kUnit, starts);
  REQUIRE(r.failures() == 0);
  CHECK(r.trajectories[0]->points == r.trajectories[2]->points);
  CHECK(r.trajectories[1]->points.front()[0] == -1.0);
  const auto serial = integrate_ensemble(rec, kUnit, starts, {}, Execution::serial);
  for (std::size_t i = 0; i < starts.size(); ++i)
    CHECK(serial.trajectories[i]->points == r.trajectories[i]->points);
}

TEST_CASE("failures are reported per trajectory") {
  const GridSpec g({128}, {-10.0}, {10.0});
  std::vector<Complex> a(g.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = g.node(i)[0];
    a[i] = Complex(x, 0.2 * x) * std::exp(-x * x / 2.0);
  }
  WaveFunction odd(g, a);
  odd.normalize();
  const auto rec = frozen(odd, 11, 0.1);
  const auto r = integrate_ensemble(rec, kUnit, std::vector<Point>{{1.0}, {0.0}, {-1.0}});
  CHECK(r.failures() == 1);
  CHECK(r.trajectories[0].has_value());
  REQUIRE(r.errors[1].has_value());
  CHECK(r.errors[1]->kind() == ErrorKind::NodeProximity);
  CHECK(r.errors[1]->time().has_value());
  CHECK(r.errors[1]->location().has_value());
}

TEST_CASE("requests outside the record fail") {
  const auto rec = free_gaussian_record();
  IntegrationOptions opts;
  opts.t_end = 2.0;
  CHECK_THROWS_AS(integrate_guidance(rec, kUnit, {0.0}, opts), Error);
  CHECK_THROWS_AS(integrate_guidance(rec, kUnit, {25.0}), Error);
  const std::vector<double> times{0.0, 0.5, 1.0};
  CHECK_THROWS_AS(bracket_time(times, 1.5), Error);
  const auto b = bracket_time(times, 0.75);
  CHECK(b.lower == 1);
  CHECK(b.upper == 2);
  CHECK(b.weight == doctest::Approx(0.5));
}

TEST_CASE("endpoint-only integration keeps the final point") {
  const auto rec = free_gaussian_record(0.2);
  IntegrationOptions opts;
  const auto full = integrate_guidance(rec, kUnit, {0.4}, opts);
  opts.endpoint_only = true;
  const auto end = integrate_guidance(rec, kUnit, {0.4}, opts);
  REQUIRE(end.points.size() == 2);
  CHECK(end.points.front() == full.points.front());
  CHECK(end.points.back() == full.points.back());
}
