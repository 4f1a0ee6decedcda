#pragma once

#include <cmath>

namespace fidsim {

inline constexpr double planck_h = 6.62607015e-34;     // J s
inline constexpr double speed_of_light = 2.99792458e8; // m/s
inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Energy of one photon at vacuum wavelength `lambda` (J).
inline double photon_energy(double lambda) {
  return planck_h * speed_of_light / lambda;
}

/// Power transmission factor for a loss of `db` decibels.
inline double db_to_power(double db) { return std::pow(10.0, -db / 10.0); }

/// Amplitude transmission factor for a loss of `db` decibels.
inline double db_to_amplitude(double db) { return std::pow(10.0, -db / 20.0); }

} // namespace fidsim
