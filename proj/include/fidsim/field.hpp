#pragma once

#include <complex>
#include <string>
#include <vector>

namespace fidsim {

/// Slowly-varying complex field envelope, uniformly sampled. Amplitudes
/// are in photon-flux units: |a|^2 = photons/second, so
/// sum |a_i|^2 * dt is a photon number.
struct FieldTrace {
  std::vector<std::complex<double>> samples;
  double dt = 0.0; // s, > 0
  double t0 = 0.0; // s, absolute time of samples[0]

  std::size_t size() const { return samples.size(); }
  double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double t_end() const { return t0 + static_cast<double>(size()) * dt; }

  /// Integrated photon number.
  double energy() const;
  /// Peak photon flux |a|^2.
  double peak_flux() const;
  /// Photon number between t_start and t_stop (sample-aligned sum).
  double energy_in(double t_start, double t_stop) const;

  bool same_time_base(const FieldTrace& other) const;
};

enum class PulseShape { square, gaussian };

PulseShape pulse_shape_from_string(const std::string& s);
std::string to_string(PulseShape s);

struct PulseSpec {
  PulseShape shape = PulseShape::square;
  double duration = 2e-6;              // s (FWHM for gaussian)
  double peak_power = 2e-3;            // W
  double carrier_wavelength = 1532e-9; // m
  double carrier_detuning = 0.0;       // Hz, laser minus line center

  void validate() const;

  /// Spectral bandwidth estimate (Hz) used for grid-coverage checks:
  /// 1/duration for square, 0.44/duration for gaussian.
  double bandwidth() const;

  /// Photon number the rendered trace integrates to.
  double photon_number() const;

  /// Time at which the rendered envelope returns to zero (pulse end).
  double nominal_end() const;
};

/// Samples the pulse envelope at step dt. The pulse starts at t = 0 and is
/// preceded by `pre_pad` and followed by `post_pad` seconds of zero field
/// (the post pad is the emission observation window). For gaussian shapes
/// the envelope is centered at duration/2 and the nominal edges are padded
/// by 3 sigma so the truncated tails are negligible.
FieldTrace render_pulse(const PulseSpec& spec, double dt, double pre_pad,
                        double post_pad);

} // namespace fidsim
