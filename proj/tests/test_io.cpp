#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>

#include "doctest.h"
#include "pwlab/bohm.hpp"
#include "pwlab/io.hpp"

using namespace pwlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pwlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("doubles survive text formatting") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> exp(-300.0, 300.0);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double x = mant(rng) * std::pow(10.0, exp(rng));
    CHECK(std::stod(io::format_double(x)) == x);
  }
  // stod reports ERANGE for subnormals, strtod still returns the value.
  CHECK(std::strtod(io::format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
        std::numeric_limits<double>::denorm_min());
}

TEST_CASE("wavefunction snapshots round trip") {
  const GridSpec g({32, 32}, {-6.0, -5.0}, {6.0, 5.0});
  auto psi = gaussian_packet(g, {0.3, -0.1}, {1.2, 0.4}, {0.7, 0.5});
  psi.twist = {0.1, -0.2, 0.0};
  psi.global_phase = 0.77;
  psi.time = 1.25;
  for (auto enc : {io::Encoding::csv, io::Encoding::binary}) {
    const auto dir = scratch(enc == io::Encoding::csv ? "snap_csv" : "snap_bin");
    io::write_snapshot(dir, "psi", psi, enc);
    const auto back = io::read_wavefunction(dir / "psi.json");
    CHECK(back.grid == psi.grid);
    CHECK(back.amplitudes == psi.amplitudes);
    CHECK(back.twist == psi.twist);
    CHECK(back.global_phase == psi.global_phase);
    CHECK(back.time == psi.time);
  }
}

TEST_CASE("density snapshots round trip") {
  const auto rho = density(gaussian_packet(GridSpec({64}, {-8.0}, {8.0}), {0.0}, {0.0}, {1.0}));
  const auto dir = scratch("rho");
  io::write_snapshot(dir, "rho", rho);
  const auto back = io::read_density(dir / "rho.json");
  CHECK(back.values == rho.values);
  CHECK(back.grid == rho.grid);
  CHECK_THROWS(io::read_wavefunction(dir / "rho.json"));
}

TEST_CASE("evolution records round trip") {
  const GridSpec g({64}, {-10.0}, {10.0});
  const ParticleModel m{{1.5}, {}};
  const auto rec = evolve(gaussian_packet(g, {0.0}, {0.5}, {1.0}), Potential::free(), m, 0.05,
                          1e-3, 10);
  const auto dir = scratch("evo");
  io::write_evolution(dir, rec, io::Encoding::binary);
  const auto back = io::read_evolution(dir);
  REQUIRE(back.snapshots.size() == rec.snapshots.size());
  for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
    CHECK(back.snapshots[i].amplitudes == rec.snapshots[i].amplitudes);
    CHECK(back.snapshots[i].time == rec.snapshots[i].time);
  }
  CHECK(back.model.masses == m.masses);
  CHECK(back.dt == rec.dt);
  const auto meta = io::read_json(dir / "evolution.json");
  CHECK(meta["scheme"] == "strang-2");
}

TEST_CASE("trajectory tables round trip") {
  const GridSpec g({256}, {-20.0}, {20.0});
  const ParticleModel m = ParticleModel::uniform(1, 1.0);
  const auto rec = evolve(gaussian_packet(g, {0.0}, {0.3}, {1.0}), Potential::free(), m, 0.1);
  std::vector<Trajectory> ts;
  for (double x0 : {-0.5, 0.25}) ts.push_back(integrate_guidance(rec, m, {x0}));
  ts.push_back(integrate_second_order(rec, Potential::free(), m, {0.1}, {0.3}));
  const auto dir = scratch("traj");
  io::write_trajectories_csv(dir / "t.csv", ts);
  const auto back = io::read_trajectories_csv(dir / "t.csv", 1);
  REQUIRE(back.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(back[i].times == ts[i].times);
    CHECK(back[i].points == ts[i].points);
    CHECK(back[i].velocities == ts[i].velocities);
  }
}

TEST_CASE("unknown files are reported") {
  CHECK_THROWS(io::read_json("/nonexistent/pwlab.json"));
}
