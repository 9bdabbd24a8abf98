#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pwlab/error.hpp"
#include "pwlab/grid.hpp"

using namespace pwlab;

TEST_CASE("grid geometry") {
  const GridSpec g({16, 32}, {-1.0, 0.0}, {1.0, 4.0});
  CHECK(g.dim() == 2);
  CHECK(g.size() == 512);
  CHECK(g.spacing(0) == doctest::Approx(0.125));
  CHECK(g.spacing(1) == doctest::Approx(0.125));
  CHECK(g.stride(1) == 1);
  CHECK(g.stride(0) == 32);
  CHECK(g.volume() == doctest::Approx(8.0));
  CHECK(g.cell_volume() * g.size() == doctest::Approx(g.volume()));
}

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(GridSpec({24}, {0.0}, {1.0}), Error);
  CHECK_THROWS_AS(GridSpec({8}, {0.0}, {1.0}), Error);
  CHECK_THROWS_AS(GridSpec({16}, {1.0}, {1.0}), Error);
  CHECK_THROWS_AS(GridSpec({16, 16, 16, 16}, {0, 0, 0, 0}, {1, 1, 1, 1}), Error);
  CHECK_THROWS_AS(GridSpec({16}, {0.0, 0.0}, {1.0}), Error);
}

TEST_CASE("flat index round trip") {
  const GridSpec g({16, 32, 64}, {0, 0, 0}, {1, 1, 1});
  for (std::size_t flat : {std::size_t{0}, std::size_t{1}, std::size_t{777}, g.size() - 1}) {
    const auto idx = g.unflatten(flat);
    CHECK(idx[0] * g.stride(0) + idx[1] * g.stride(1) + idx[2] == flat);
    const Point p = g.node(flat);
    for (int a = 0; a < 3; ++a) CHECK(p[a] == g.coordinate(a, idx[a]));
  }
}

TEST_CASE("wavenumbers follow FFT ordering") {
  const GridSpec g = GridSpec::line(16, 0.0, 2.0 * std::numbers::pi);
  CHECK(g.wavenumber(0, 0) == 0.0);
  CHECK(g.wavenumber(0, 1) == doctest::Approx(1.0));
  CHECK(g.wavenumber(0, 7) == doctest::Approx(7.0));
  CHECK(g.wavenumber(0, 8) == doctest::Approx(-8.0));
  CHECK(g.wavenumber(0, 15) == doctest::Approx(-1.0));
}

TEST_CASE("wrap maps into the box") {
  const GridSpec g = GridSpec::line(16, -2.0, 2.0);
  CHECK(g.wrap(0, 2.0) == doctest::Approx(-2.0));
  CHECK(g.wrap(0, 5.5) == doctest::Approx(1.5));
  CHECK(g.wrap(0, -6.5) == doctest::Approx(1.5));
  CHECK(g.wrap(0, -2.0) == -2.0);
}
