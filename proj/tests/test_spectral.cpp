#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pwlab/kernels.hpp"
#include "pwlab/spectral.hpp"

using namespace pwlab;

namespace {

std::vector<Complex> sample(const GridSpec& g, auto f) {
  std::vector<Complex> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.node(i));
  return out;
}

double max_gap(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<Complex> random_field(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<Complex> out(n);
  for (auto& z : out) z = {d(rng), d(rng)};
  return out;
}

}  // namespace

TEST_CASE("forward then inverse is the identity") {
  const GridSpec g({32, 16}, {0, 0}, {1, 1});
  const Spectral s(g);
  const auto f = random_field(g.size(), 3);
  auto h = f;
  s.forward(h);
  s.inverse(h);
  CHECK(max_gap(f, h) < 1e-13);
}

TEST_CASE("spectral derivatives of trigonometric modes are exact") {
  const double two_pi = 2.0 * std::numbers::pi;
  const GridSpec g({64}, {0.0}, {two_pi});
  const Spectral s(g);
  const auto f = sample(g, [](const Point& x) { return Complex(std::sin(3.0 * x[0]), 0.0); });
  const auto d1 = s.derivative(f, 0, 1);
  const auto d2 = s.derivative(f, 0, 2);
  const auto e1 = sample(g, [](const Point& x) { return Complex(3.0 * std::cos(3.0 * x[0]), 0.0); });
  const auto e2 = sample(g, [](const Point& x) { return Complex(-9.0 * std::sin(3.0 * x[0]), 0.0); });
  CHECK(max_gap(d1, e1) < 1e-12);
  CHECK(max_gap(d2, e2) < 1e-11);
}

TEST_CASE("derivative of a Gaussian matches its closed form") {
  const GridSpec g({256}, {-20.0}, {20.0});
  const Spectral s(g);
  const auto f = sample(g, [](const Point& x) { return Complex(std::exp(-x[0] * x[0] / 4.0), 0.0); });
  const auto d = s.derivative(f, 0, 1);
  const auto e = sample(g, [](const Point& x) {
    return Complex(-0.5 * x[0] * std::exp(-x[0] * x[0] / 4.0), 0.0);
  });
  CHECK(max_gap(d, e) < 1e-12);
}

TEST_CASE("translate shifts band-limited data exactly") {
  const GridSpec g({128, 64}, {-12.0, -10.0}, {12.0, 10.0});
  const Spectral s(g);
  auto gauss = [](double cx, double cy) {
    return [=](const Point& x) {
      return Complex(std::exp(-((x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy)) / 2.0), 0.0);
    };
  };
  auto f = sample(g, gauss(0.0, 0.0));
  s.translate(f, {0.37, -1.21});
  CHECK(max_gap(f, sample(g, gauss(-0.37, 1.21))) < 1e-12);
  s.translate(f, {-0.37, 1.21});
  CHECK(max_gap(f, sample(g, gauss(0.0, 0.0))) < 1e-12);
}

TEST_CASE("shear resamples along one axis") {
  const GridSpec g({128, 128}, {-12.0, -12.0}, {12.0, 12.0});
  const Spectral s(g);
  auto f = sample(g, [](const Point& x) {
    return Complex(std::exp(-(x[0] * x[0] + x[1] * x[1]) / 2.0), 0.0);
  });
  const double c = 0.4;
  s.shear(f, 0, 1, c);
  const auto e = sample(g, [c](const Point& x) {
    const double u = x[0] + c * x[1];
    return Complex(std::exp(-(u * u + x[1] * x[1]) / 2.0), 0.0);
  });
  CHECK(max_gap(f, e) < 1e-10);
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  const std::size_t n = 4099;
  const auto psi = random_field(n, 11);
  const auto dpsi = random_field(n, 12);
  const auto fac = random_field(n, 13);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(0.01 * static_cast<double>(i));

  auto a = psi, b = psi;
  kernels::serial::multiply(a, fac);
  kernels::parallel::multiply(b, fac);
  CHECK(a == b);

  a = psi;
  b = psi;
  kernels::serial::potential_phase(a, v, 0.37);
  kernels::parallel::potential_phase(b, v, 0.37);
  CHECK(a == b);

  std::vector<double> ra(n), rb(n);
  kernels::serial::modulus_squared(psi, ra);
  kernels::parallel::modulus_squared(psi, rb);
  CHECK(ra == rb);
  kernels::serial::modulus(psi, ra);
  kernels::parallel::modulus(psi, rb);
  CHECK(ra == rb);

  std::vector<double> rho(n);
  kernels::serial::modulus_squared(psi, rho);
  std::vector<std::uint8_t> ma(n), mb(n);
  kernels::serial::floor_mask(rho, 0.5, ma);
  kernels::parallel::floor_mask(rho, 0.5, mb);
  CHECK(ma == mb);

  kernels::serial::guidance_velocity(psi, dpsi, 0.2, 1.7, ma, ra);
  kernels::parallel::guidance_velocity(psi, dpsi, 0.2, 1.7, ma, rb);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::isnan(ra[i]) == std::isnan(rb[i]));
    if (!std::isnan(ra[i])) CHECK(ra[i] == rb[i]);
  }

  std::vector<Complex> ja(n), jb(n);
  kernels::serial::probability_current(psi, dpsi, 0.2, 1.7, ja);
  kernels::parallel::probability_current(psi, dpsi, 0.2, 1.7, jb);
  CHECK(ja == jb);
}
