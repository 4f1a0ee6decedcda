#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fidsim/analysis.hpp"
#include "fidsim/rng.hpp"
#include "fidsim/units.hpp"

using namespace fidsim;

namespace {

FringeScan synthetic_scan(double offset, double visibility, double phi0,
                          std::size_t n = 24, double noise_sigma = 0.0,
                          std::uint64_t seed = 1) {
  RngStream rng(seed);
  FringeScan scan;
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = 2.2 * M_PI * static_cast<double>(i) /
                       static_cast<double>(n - 1);
    double y = offset * (1.0 + visibility * std::cos(phi - phi0));
    if (noise_sigma > 0.0) y += noise_sigma * rng.normal();
    scan.phases.push_back(phi);
    scan.values.push_back(y);
    if (noise_sigma > 0.0) scan.value_errors.push_back(noise_sigma);
  }
  return scan;
}

} // namespace

TEST_CASE("mandel visibility: exact anchor values") {
  CHECK(mandel_visibility(1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mandel_visibility(12345, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mandel_visibility(7, M_PI) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(mandel_visibility(1, 0.5 * M_PI) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mandel_visibility(1000000, 0.5 * M_PI) ==
        doctest::Approx(0.999999).epsilon(1e-9));
  // N = 1 reduces to cos^2(theta/2) exactly.
  for (double theta : {0.1, 0.7, 1.9, 3.0}) {
    const double c = std::cos(0.5 * theta);
    CHECK(mandel_visibility(1, theta) == doctest::Approx(c * c).epsilon(1e-14));
  }
}

TEST_CASE("mandel visibility: monotone in N, bounded in [0,1]") {
  for (double theta : {0.0, 0.4, 1.5, 2.8}) {
    double prev = -1.0;
    for (std::size_t n : {1u, 2u, 5u, 20u, 1000u, 1000000u}) {
      const double v = mandel_visibility(n, theta);
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
      REQUIRE(v >= prev - 1e-15);
      prev = v;
    }
  }
  CHECK_THROWS_AS(mandel_visibility(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(mandel_visibility(5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(mandel_visibility(5, 3.5), std::invalid_argument);
}

TEST_CASE("two-beam visibility") {
  CHECK(two_beam_visibility(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(two_beam_visibility(1.0, 0.0) == doctest::Approx(0.0));
  CHECK(two_beam_visibility(4.0, 1.0) == doctest::Approx(0.8).epsilon(1e-12));
  // <= 1 with equality iff equal intensities
  RngStream rng(3);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform() + 1e-6, b = rng.uniform() + 1e-6;
    const double v = two_beam_visibility(a, b);
    REQUIRE(v <= 1.0 + 1e-12);
    if (std::abs(a - b) > 1e-3) REQUIRE(v < 1.0);
  }
  CHECK_THROWS_AS(two_beam_visibility(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(two_beam_visibility(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("fringe fit recovers a noiseless generator") {
  const auto scan = synthetic_scan(2.0, 0.5, 0.9);
  const auto fit = fit_fringe(scan);
  CHECK(fit.visibility == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.offset == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.phase_origin == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(fit.visibility_stderr < 1e-9);
}

TEST_CASE("constant scan fits zero visibility with unbounded phase origin") {
  FringeScan scan;
  for (int i = 0; i < 12; ++i) {
    scan.phases.push_back(two_pi * i / 11.0);
    scan.values.push_back(3.7);
  }
  const auto fit = fit_fringe(scan);
  CHECK(fit.visibility == doctest::Approx(0.0));
  CHECK(std::isinf(fit.phase_origin_stderr));
}

TEST_CASE("fit validation") {
  FringeScan scan;
  for (int i = 0; i < 5; ++i) {
    scan.phases.push_back(two_pi * i / 4.0);
    scan.values.push_back(1.0);
  }
  CHECK_THROWS_AS(fit_fringe(scan), std::invalid_argument); // too few points
  scan = synthetic_scan(1.0, 0.2, 0.0);
  for (auto& p : scan.phases) p *= 0.4; // span < 2 pi
  CHECK_THROWS_AS(fit_fringe(scan), std::invalid_argument);
}

TEST_CASE("noisy fits cover the true visibility within 3 sigma") {
  // Parametric-covariance coverage, plus a seeded residual bootstrap
  // cross-check on one instance.
  const double true_v = 0.8;
  std::size_t covered = 0;
  const std::size_t trials = 200;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto scan = synthetic_scan(1.0, true_v, 0.3, 24, 0.03, 100 + trial);
    const auto fit = fit_fringe(scan);
    if (std::abs(fit.visibility - true_v) <= 3.0 * fit.visibility_stderr)
      ++covered;
  }
  CHECK(covered >= static_cast<std::size_t>(0.95 * trials));

  // Bootstrap: refit with resampled residuals; the spread should agree
  // with the parametric stderr within a factor of two.
  const auto scan = synthetic_scan(1.0, true_v, 0.3, 24, 0.03, 77);
  const auto fit = fit_fringe(scan);
  RngStream rng(500);
  std::vector<double> boot;
  for (int b = 0; b < 200; ++b) {
    FringeScan resampled = scan;
    for (std::size_t i = 0; i < resampled.values.size(); ++i) {
      const double model =
          fit.offset + fit.amplitude * std::cos(scan.phases[i] - fit.phase_origin);
      resampled.values[i] = model + 0.03 * rng.normal();
    }
    boot.push_back(fit_fringe(resampled).visibility);
  }
  double mean = 0.0, var = 0.0;
  for (double v : boot) mean += v;
  mean /= boot.size();
  for (double v : boot) var += (v - mean) * (v - mean);
  var /= (boot.size() - 1);
  const double ratio = std::sqrt(var) / fit.visibility_stderr;
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("net visibility subtracts the noise floor") {
  FringeFit fit;
  fit.amplitude = 0.14;
  fit.offset = 0.16;
  CHECK(net_visibility(fit, 0.0) == doctest::Approx(0.875));
  CHECK(net_visibility(fit, 0.012) == doctest::Approx(0.9459).epsilon(1e-3));
  CHECK_THROWS_AS(net_visibility(fit, 0.16), std::invalid_argument);
  CHECK_THROWS_AS(net_visibility(fit, 0.2), std::invalid_argument);
}

TEST_CASE("scaling exponent recovers power laws") {
  std::vector<double> x, y1, y3;
  for (double v : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    x.push_back(v);
    y1.push_back(2.5 * v);
    y3.push_back(0.1 * v * v * v);
  }
  CHECK(scaling_exponent(x, y1).slope == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(scaling_exponent(x, y3).slope == doctest::Approx(3.0).epsilon(1e-9));
  CHECK_THROWS_AS(scaling_exponent({1.0, 2.0}, {1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(scaling_exponent({1.0, -2.0, 3.0}, {1.0, 2.0, 3.0}),
                  std::invalid_argument);
}
