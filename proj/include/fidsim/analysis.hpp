#pragma once

#include <cstddef>
#include <vector>

namespace fidsim {

/// One fringe scan: detected quantity (probability, energy or signal area)
/// versus controlled phase. value_errors may be empty (unweighted fit).
struct FringeScan {
  std::vector<double> phases;       // rad, must span >= 2 pi for a fit
  std::vector<double> values;
  std::vector<double> value_errors; // standard errors, optional
  double noise_level = 0.0;         // same units as values

  void validate() const;
};

/// Least-squares fit of offset + amplitude * cos(phase - phase_origin)
/// with the period fixed at 2 pi of the control variable.
struct FringeFit {
  double amplitude = 0.0;
  double offset = 0.0;
  double phase_origin = 0.0;
  double visibility = 0.0; // amplitude / offset
  double visibility_stderr = 0.0;
  double phase_origin_stderr = 0.0;
  std::size_t n_points = 0;
  double residual_rms = 0.0;
};

/// Predicted fringe visibility for spontaneous emission from two
/// ensembles of N atoms excited with pulse area theta:
///   V = N cos^2(theta/2) / (1 + (N-1) cos^2(theta/2)).
/// Exact closed form; theta must lie in [0, pi].
double mandel_visibility(std::size_t n_atoms, double theta);

/// Two-beam interference visibility 2 sqrt(i1 i2) / (i1 + i2).
double two_beam_visibility(double i1, double i2);

/// Weighted (or unweighted) linear least squares in the basis
/// {1, cos(phase), sin(phase)}; uncertainties from the parameter
/// covariance. A constant scan fits amplitude 0 with infinite
/// phase_origin_stderr rather than throwing.
FringeFit fit_fringe(const FringeScan& scan);

/// amplitude / (offset - noise_level). Throws if noise_level >= offset.
double net_visibility(const FringeFit& fit, double noise_level);

struct SlopeFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
};

/// Least-squares slope of log(fid_energy) vs log(pulse_energy); all
/// entries must be strictly positive, at least 3 pairs.
SlopeFit scaling_exponent(const std::vector<double>& pulse_energies,
                          const std::vector<double>& fid_energies);

} // namespace fidsim
