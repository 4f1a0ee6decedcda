#include "fidsim/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fidsim/units.hpp"

namespace fidsim {

double FieldTrace::energy() const {
  double e = 0.0;
  for (const auto& a : samples) e += std::norm(a);
  return e * dt;
}

double FieldTrace::peak_flux() const {
  double p = 0.0;
  for (const auto& a : samples) p = std::max(p, std::norm(a));
  return p;
}

double FieldTrace::energy_in(double t_start, double t_stop) const {
  double e = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double t = time_at(i);
    if (t >= t_start && t < t_stop) e += std::norm(samples[i]);
  }
  return e * dt;
}

bool FieldTrace::same_time_base(const FieldTrace& other) const {
  return size() == other.size() && dt == other.dt && t0 == other.t0;
}

PulseShape pulse_shape_from_string(const std::string& s) {
  if (s == "square") return PulseShape::square;
  if (s == "gaussian") return PulseShape::gaussian;
  throw std::invalid_argument("unknown pulse shape: " + s);
}

std::string to_string(PulseShape s) {
  return s == PulseShape::square ? "square" : "gaussian";
}

void PulseSpec::validate() const {
  if (!(duration > 0.0))
    throw std::invalid_argument("pulse: duration must be > 0");
  if (!(peak_power >= 0.0))
    throw std::invalid_argument("pulse: peak_power must be >= 0");
  if (!(carrier_wavelength > 0.0))
    throw std::invalid_argument("pulse: carrier_wavelength must be > 0");
}

double PulseSpec::bandwidth() const {
  return (shape == PulseShape::square ? 1.0 : 0.44) / duration;
}

double PulseSpec::photon_number() const {
  const double eph = photon_energy(carrier_wavelength);
  // Gaussian power envelope of FWHM tau integrates to
  // peak * tau * sqrt(pi / (4 ln 2)).
  const double effective =
      shape == PulseShape::square
          ? duration
          : duration * std::sqrt(M_PI / (4.0 * std::log(2.0)));
  return peak_power * effective / eph;
}

double PulseSpec::nominal_end() const {
  if (shape == PulseShape::square) return duration;
  return 8.0 * duration / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

FieldTrace render_pulse(const PulseSpec& spec, double dt, double pre_pad,
                        double post_pad) {
  spec.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("render_pulse: dt must be > 0");
  if (dt > spec.duration)
    throw std::invalid_argument(
        "render_pulse: dt must resolve the pulse duration");
  if (pre_pad < 0.0 || post_pad < 0.0)
    throw std::invalid_argument("render_pulse: pads must be >= 0");

  const double peak_flux =
      spec.peak_power / photon_energy(spec.carrier_wavelength);
  const double peak_amp = std::sqrt(peak_flux);

  // Gaussian pulses nominally occupy [0, 8 sigma] of the power envelope
  // (truncation below 3.4e-4 of peak power); square pulses [0, duration].
  const double sigma_p =
      spec.duration / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double body = spec.nominal_end();
  const double t_begin = -pre_pad;
  const double t_total = pre_pad + body + post_pad;
  const auto n = static_cast<std::size_t>(std::ceil(t_total / dt - 1e-9));

  FieldTrace trace;
  trace.dt = dt;
  trace.t0 = t_begin;
  trace.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = trace.time_at(i);
    double amp = 0.0;
    if (spec.shape == PulseShape::square) {
      if (t >= 0.0 && t < spec.duration) amp = peak_amp;
    } else {
      if (t >= 0.0 && t < body) {
        const double x = (t - 0.5 * body) / sigma_p;
        amp = peak_amp * std::exp(-0.25 * x * x);
      }
    }
    trace.samples[i] = amp;
  }
  return trace;
}

} // namespace fidsim
