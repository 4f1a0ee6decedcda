#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fidsim/grid.hpp"
#include "fidsim/units.hpp"

using namespace fidsim;

TEST_CASE("flat grid with three classes") {
  const auto grid = make_detuning_grid(LineProfile::flat, 10e6, 3);
  REQUIRE(grid.size() == 3);
  CHECK(grid.detunings[0] == doctest::Approx(-two_pi * 5e6));
  CHECK(grid.detunings[1] == doctest::Approx(0.0));
  CHECK(grid.detunings[2] == doctest::Approx(two_pi * 5e6));
  for (double w : grid.weights) CHECK(w == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("weights normalized and symmetric") {
  for (auto profile :
       {LineProfile::flat, LineProfile::gaussian, LineProfile::lorentzian}) {
    const auto grid = make_detuning_grid(profile, 25e6, 41);
    const double sum =
        std::accumulate(grid.weights.begin(), grid.weights.end(), 0.0);
    CHECK(std::abs(sum - 1.0) < 1e-12);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      CHECK(grid.weights[k] >= 0.0);
      CHECK(grid.weights[k] ==
            doctest::Approx(grid.weights[grid.size() - 1 - k]));
      if (k > 0) CHECK(grid.detunings[k] > grid.detunings[k - 1]);
    }
  }
}

TEST_CASE("gaussian weight peaks at zero detuning") {
  const auto grid = make_detuning_grid(LineProfile::gaussian, 8e6, 33);
  const std::size_t mid = grid.size() / 2;
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(grid.weights[mid] >= grid.weights[k]);
}

TEST_CASE("fine flat grid quadrature matches the analytic integral") {
  // Riemann sum of the weights against cos(a*detuning) compared with the
  // closed form for the represented flat density: each of the N classes
  // owns one cell of width d, so the continuum support is N*d wide and
  // the integral is sinc(a*N*d/2).
  const double span = 10e6;
  const auto grid = make_detuning_grid(LineProfile::flat, span, 1001);
  const double spacing = grid.detunings[1] - grid.detunings[0];
  const double half_width = 0.5 * 1001.0 * spacing;
  for (double a : {1e-8, 2e-8, 5e-8}) {
    double sum = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
      sum += grid.weights[k] * std::cos(a * grid.detunings[k]);
    const double exact = std::sin(a * half_width) / (a * half_width);
    CHECK(std::abs(sum - exact) < 1e-6);
  }
}

TEST_CASE("peak density matches the continuum value for flat grids") {
  const double span = 20e6;
  const auto grid = make_detuning_grid(LineProfile::flat, span, 201);
  // Flat comb of N classes spaced d apart: density 1/(N d).
  const double spacing = grid.detunings[1] - grid.detunings[0];
  CHECK(grid.peak_density() ==
        doctest::Approx(1.0 / (201.0 * spacing)).epsilon(1e-12));
}

TEST_CASE("construction rejects bad arguments") {
  CHECK_THROWS_AS(make_detuning_grid(LineProfile::flat, -1.0, 11),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_detuning_grid(LineProfile::flat, 0.0, 11),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_detuning_grid(LineProfile::flat, 1e6, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_detuning_grid(LineProfile::flat, 1e6, 1),
                  std::invalid_argument);
  // Span must cover 10x the declared excitation bandwidth.
  CHECK_THROWS_AS(make_detuning_grid(LineProfile::flat, 1e6, 11, 5e5),
                  std::invalid_argument);
  CHECK_NOTHROW(make_detuning_grid(LineProfile::flat, 1e7, 11, 5e5));
}
