#pragma once

#include <string>
#include <vector>

namespace fidsim {

enum class LineProfile { flat, gaussian, lorentzian };

LineProfile line_profile_from_string(const std::string& s);
std::string to_string(LineProfile p);

/// Discretized slice of the inhomogeneous absorption line seen by the
/// excitation laser: detuning classes (rad/s, relative to the nominal
/// carrier) with normalized spectral weights.
struct DetuningGrid {
  std::vector<double> detunings; // rad/s, strictly increasing
  std::vector<double> weights;   // non-negative, sum to 1

  std::size_t size() const { return detunings.size(); }

  double max_abs_detuning() const;

  /// Continuum spectral density (weight per rad/s) at line center,
  /// estimated from the central class and its local spacing. This is the
  /// normalization that fixes the absorption calibration.
  double peak_density() const;
};

/// Builds a symmetric grid of `n_classes` (odd, >= 3) detuning classes
/// covering +-span/2 around line center. `span` and the derived profile
/// widths are in Hz. For gaussian the profile FWHM is span/4, for
/// lorentzian span/10, so the gridded window carries nearly all of the
/// (renormalized) weight.
///
/// If `min_bandwidth` (Hz) is given, the grid must cover at least
/// +-5x that bandwidth; callers pass the excitation pulse bandwidth so
/// under-resolved media are rejected up front.
DetuningGrid make_detuning_grid(LineProfile profile, double span,
                                std::size_t n_classes,
                                double min_bandwidth = 0.0);

} // namespace fidsim
