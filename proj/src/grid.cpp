#include "fidsim/grid.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fidsim/units.hpp"

namespace fidsim {

LineProfile line_profile_from_string(const std::string& s) {
  if (s == "flat") return LineProfile::flat;
  if (s == "gaussian") return LineProfile::gaussian;
  if (s == "lorentzian") return LineProfile::lorentzian;
  throw std::invalid_argument("unknown line profile: " + s);
}

std::string to_string(LineProfile p) {
  switch (p) {
    case LineProfile::flat: return "flat";
    case LineProfile::gaussian: return "gaussian";
    case LineProfile::lorentzian: return "lorentzian";
  }
  return "flat";
}

double DetuningGrid::max_abs_detuning() const {
  double m = 0.0;
  for (double d : detunings) m = std::max(m, std::abs(d));
  return m;
}

double DetuningGrid::peak_density() const {
  if (detunings.size() < 3) throw std::logic_error("grid too small");
  const std::size_t c = detunings.size() / 2;
  const double spacing = 0.5 * (detunings[c + 1] - detunings[c - 1]);
  return weights[c] / spacing;
}

DetuningGrid make_detuning_grid(LineProfile profile, double span,
                                std::size_t n_classes, double min_bandwidth) {
  if (!(span > 0.0)) throw std::invalid_argument("grid span must be > 0");
  if (n_classes < 3 || n_classes % 2 == 0)
    throw std::invalid_argument("n_classes must be odd and >= 3");
  if (min_bandwidth > 0.0 && span < 10.0 * min_bandwidth)
    throw std::invalid_argument(
        "grid span must cover at least +-5x the excitation bandwidth");

  const double half = 0.5 * two_pi * span; // rad/s
  const std::size_t m = n_classes / 2;

  DetuningGrid grid;
  grid.detunings.resize(n_classes);
  grid.weights.resize(n_classes);
  for (std::size_t k = 0; k < n_classes; ++k) {
    // Symmetric by construction: build from the signed class index.
    const double x = static_cast<double>(static_cast<long long>(k) -
                                         static_cast<long long>(m)) /
                     static_cast<double>(m);
    grid.detunings[k] = half * x;
    switch (profile) {
      case LineProfile::flat:
        grid.weights[k] = 1.0;
        break;
      case LineProfile::gaussian: {
        // FWHM = span/4: the window extends to +-2 FWHM.
        const double fwhm = 0.25 * two_pi * span;
        grid.weights[k] =
            std::exp(-4.0 * std::log(2.0) * grid.detunings[k] *
                     grid.detunings[k] / (fwhm * fwhm));
        break;
      }
      case LineProfile::lorentzian: {
        // FWHM = span/10: the window extends to +-5 FWHM.
        const double hwhm = 0.05 * two_pi * span;
        grid.weights[k] =
            1.0 / (1.0 + grid.detunings[k] * grid.detunings[k] / (hwhm * hwhm));
        break;
      }
    }
  }

  const double total =
      std::accumulate(grid.weights.begin(), grid.weights.end(), 0.0);
  for (double& w : grid.weights) w /= total;
  return grid;
}

} // namespace fidsim
