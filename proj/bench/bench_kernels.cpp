// Serial reference vs OpenMP timings for the hot kernels and two end-to-end
// workloads. Usage: pwlab_bench [repeats]
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "pwlab/core.hpp"
#include "pwlab/equivariance.hpp"
#include "pwlab/kernels.hpp"
#include "pwlab/schrodinger.hpp"

using namespace pwlab;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, s);
  }
  return best;
}

// Invalid nodes hold NaN, so compare bit patterns.
template <class Components>
bool same_bits(const Components& a, const Components& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].size() != b[k].size() ||
        std::memcmp(a[k].data(), b[k].data(), a[k].size() * sizeof(double)) != 0)
      return false;
  return true;
}

void row(const std::string& name, double serial, double parallel, bool same) {
  std::printf("%-28s %12.6f %12.6f %8.2fx  %s\n", name.c_str(), serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
  std::printf("threads %d, best of %d\n", omp_get_max_threads(), repeats);
  std::printf("%-28s %12s %12s %9s\n", "workload", "serial [s]", "omp [s]", "speedup");

  const GridSpec g2({512, 512}, {-20.0, -20.0}, {20.0, 20.0});
  const ParticleModel m2 = ParticleModel::uniform(2, 1.0);
  const auto psi = gaussian_packet(g2, {0.5, -0.3}, {0.7, 0.2}, {1.5, 1.2});
  const std::size_t n = g2.size();

  {
    std::vector<double> a(n), b(n);
    const double ts = best_of(repeats, [&] { kernels::serial::modulus_squared(psi.amplitudes, a); });
    const double tp = best_of(repeats, [&] { kernels::parallel::modulus_squared(psi.amplitudes, b); });
    row("modulus_squared 512^2", ts, tp, a == b);
  }
  {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 0.5 * std::norm(Complex(g2.node(i)[0], g2.node(i)[1]));
    auto a = psi.amplitudes, b = psi.amplitudes;
    const double ts = best_of(repeats, [&] { kernels::serial::potential_phase(a, v, 1e-3); });
    const double tp = best_of(repeats, [&] { kernels::parallel::potential_phase(b, v, 1e-3); });
    row("potential_phase 512^2", ts, tp, a == b);
  }
  {
    VelocityField a, b;
    const double floor = node_floor_for(psi);
    const double ts = best_of(repeats, [&] {
      a = phase_gradient(psi, m2, floor, GradientMethod::spectral, Execution::serial);
    });
    const double tp = best_of(repeats, [&] {
      b = phase_gradient(psi, m2, floor, GradientMethod::spectral, Execution::parallel);
    });
    row("phase_gradient 512^2", ts, tp, same_bits(a.components, b.components) && a.valid == b.valid);
  }

  const GridSpec g1({1024}, {-20.0}, {20.0});
  const ParticleModel m1 = ParticleModel::uniform(1, 1.0);
  const auto psi1 = gaussian_packet(g1, {0.0}, {0.0}, {1.0});
  {
    EvolutionRecord a, b;
    const double ts = best_of(repeats, [&] {
      a = evolve(psi, Potential::harmonic({0.5, 0.5}), m2, 0.05, 1e-3, 10, Execution::serial);
    });
    const double tp = best_of(repeats, [&] {
      b = evolve(psi, Potential::harmonic({0.5, 0.5}), m2, 0.05, 1e-3, 10, Execution::parallel);
    });
    row("evolve 512^2, 50 steps", ts, tp,
        a.snapshots.back().amplitudes == b.snapshots.back().amplitudes);
  }
  {
    const auto rec = evolve(psi1, Potential::free(), m1, 1.0);
    const auto ens = equilibrium_ensemble(psi1, 2000, 3);
    TransportResult a, b;
    const double ts = best_of(repeats, [&] { a = transport_ensemble(rec, m1, ens, {}, Execution::serial); });
    const double tp = best_of(repeats, [&] { b = transport_ensemble(rec, m1, ens, {}, Execution::parallel); });
    row("transport 2000 points", ts, tp, a.state.points == b.state.points);
  }
  return 0;
}
