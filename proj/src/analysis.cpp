#include "fidsim/analysis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fidsim/units.hpp"

namespace fidsim {

void FringeScan::validate() const {
  if (phases.size() != values.size())
    throw std::invalid_argument("fringe scan: phases/values length mismatch");
  if (!value_errors.empty() && value_errors.size() != values.size())
    throw std::invalid_argument("fringe scan: value_errors length mismatch");
  if (phases.size() < 6)
    throw std::invalid_argument("fringe scan: need at least 6 points");
  double lo = phases.front(), hi = phases.front();
  for (double p : phases) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (hi - lo < two_pi * (1.0 - 1e-9))
    throw std::invalid_argument("fringe scan: phases must span >= 2 pi");
}

double mandel_visibility(std::size_t n_atoms, double theta) {
  if (n_atoms < 1)
    throw std::invalid_argument("mandel_visibility: n_atoms must be >= 1");
  if (theta < 0.0 || theta > M_PI * (1.0 + 1e-12))
    throw std::invalid_argument("mandel_visibility: theta must be in [0, pi]");
  const double c = std::cos(0.5 * theta);
  const double c2 = c * c;
  const double n = static_cast<double>(n_atoms);
  return n * c2 / (1.0 + (n - 1.0) * c2);
}

double two_beam_visibility(double i1, double i2) {
  if (i1 < 0.0 || i2 < 0.0)
    throw std::invalid_argument("two_beam_visibility: negative intensity");
  if (i1 == 0.0 && i2 == 0.0)
    throw std::invalid_argument("two_beam_visibility: both intensities zero");
  return 2.0 * std::sqrt(i1 * i2) / (i1 + i2);
}

FringeFit fit_fringe(const FringeScan& scan) {
  scan.validate();
  const std::size_t n = scan.values.size();
  const bool weighted = !scan.value_errors.empty();

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n), wgt(n);
  for (std::size_t i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(scan.phases[i]);
    design(i, 2) = std::sin(scan.phases[i]);
    y(i) = scan.values[i];
  }
  wgt.setOnes();
  if (weighted) {
    // A zero reported error (e.g. a point where every shot clicked) would
    // give that point infinite weight; substitute the smallest positive
    // error present in the scan.
    double emin = std::numeric_limits<double>::infinity();
    for (double e : scan.value_errors)
      if (e > 0.0) emin = std::min(emin, e);
    if (!std::isfinite(emin)) emin = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = scan.value_errors[i] > 0.0 ? scan.value_errors[i] : emin;
      wgt(i) = 1.0 / (e * e);
    }
  }

  const Eigen::MatrixXd xtw = design.transpose() * wgt.asDiagonal();
  const Eigen::Matrix3d normal = xtw * design;
  const Eigen::Vector3d rhs = xtw * y;
  const Eigen::Vector3d beta = normal.ldlt().solve(rhs);
  Eigen::Matrix3d cov = normal.inverse();

  const Eigen::VectorXd resid = y - design * beta;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) chi2 += wgt(i) * resid(i) * resid(i);
  if (!weighted) {
    // Scale the covariance by the residual variance estimate.
    const double s2 = chi2 / static_cast<double>(n - 3);
    cov *= s2;
  }

  FringeFit fit;
  fit.n_points = n;
  fit.offset = beta(0);
  const double b = beta(1), c = beta(2);
  fit.amplitude = std::hypot(b, c);
  fit.phase_origin = std::atan2(c, b);
  fit.residual_rms =
      std::sqrt(resid.squaredNorm() / static_cast<double>(n));

  // A numerically flat scan (amplitude at rounding level) is degenerate:
  // zero visibility, unbounded phase origin.
  double scale = std::abs(fit.offset);
  for (double v : scan.values) scale = std::max(scale, std::abs(v));
  const bool degenerate = fit.amplitude <= 1e-12 * scale;

  if (!degenerate && fit.amplitude > 0.0 && fit.offset != 0.0) {
    fit.visibility = fit.amplitude / fit.offset;
    // Propagate cov(a0, b, c) through V = hypot(b, c)/a0.
    const Eigen::Vector3d grad(-fit.amplitude / (fit.offset * fit.offset),
                               b / (fit.amplitude * fit.offset),
                               c / (fit.amplitude * fit.offset));
    const double var = grad.transpose() * cov * grad;
    fit.visibility_stderr = var > 0.0 ? std::sqrt(var) : 0.0;
    const Eigen::Vector3d gphi(0.0, -c / (fit.amplitude * fit.amplitude),
                               b / (fit.amplitude * fit.amplitude));
    const double vphi = gphi.transpose() * cov * gphi;
    fit.phase_origin_stderr = vphi > 0.0 ? std::sqrt(vphi) : 0.0;
  } else {
    fit.visibility = 0.0;
    fit.visibility_stderr =
        fit.offset != 0.0 ? std::sqrt(std::abs(cov(1, 1) + cov(2, 2))) /
                                std::abs(fit.offset)
                          : 0.0;
    fit.phase_origin = 0.0;
    fit.phase_origin_stderr = std::numeric_limits<double>::infinity();
  }
  return fit;
}

double net_visibility(const FringeFit& fit, double noise_level) {
  if (noise_level >= fit.offset)
    throw std::invalid_argument("net_visibility: noise level >= fringe offset");
  return fit.amplitude / (fit.offset - noise_level);
}

SlopeFit scaling_exponent(const std::vector<double>& pulse_energies,
                          const std::vector<double>& fid_energies) {
  if (pulse_energies.size() != fid_energies.size() || pulse_energies.size() < 3)
    throw std::invalid_argument("scaling_exponent: need >= 3 pairs");
  const std::size_t n = pulse_energies.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pulse_energies[i] > 0.0) || !(fid_energies[i] > 0.0))
      throw std::invalid_argument("scaling_exponent: entries must be > 0");
    const double x = std::log(pulse_energies[i]);
    const double y = std::log(fid_energies[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(n);
  const double denom = nn * sxx - sx * sx;
  if (denom <= 0.0)
    throw std::invalid_argument("scaling_exponent: degenerate abscissae");
  SlopeFit fit;
  fit.slope = (nn * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / nn;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(pulse_energies[i]);
    const double y = std::log(fid_energies[i]);
    const double r = y - fit.intercept - fit.slope * x;
    ssr += r * r;
  }
  if (n > 2)
    fit.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) * nn / denom);
  return fit;
}

} // namespace fidsim
