#pragma once

#include <string>

#include "fidsim/field.hpp"
#include "fidsim/rng.hpp"

namespace fidsim {

/// Acousto-optic gate in front of the detector. Open for
/// [pulse_end + open_delay, pulse_end + open_delay + open_duration];
/// closed intervals are attenuated by extinction_db (may be infinite).
struct GateSpec {
  double open_delay = 130e-9;   // s after pulse end
  double open_duration = 1e-6;  // s
  double extinction_db = 60.0;  // dB when closed

  void validate() const;
};

enum class DetectorKind { classical, single_photon };

DetectorKind detector_kind_from_string(const std::string& s);
std::string to_string(DetectorKind k);

struct DetectorSpec {
  DetectorKind kind = DetectorKind::single_photon;
  double efficiency = 0.10;  // single-photon quantum efficiency
  double dark_prob = 0.012;  // dark-count probability per window
  double window = 100e-9;    // s, counting window
  double noise_floor = 0.0;  // W, classical readout offset
  double wavelength = 1532e-9; // m, for flux <-> watts conversion

  void validate() const;
};

/// One repetition of the counting experiment. A record sequence is fully
/// reproducible from (detector config, seed).
struct DetectionRecord {
  std::size_t shot_index = 0;
  double phase_setting = 0.0;
  bool clicked = false;
};

FieldTrace gate(const FieldTrace& trace, const GateSpec& gate_spec,
                double pulse_end);

/// mu = sum |a_i|^2 dt over [start, start + window].
double mean_photons_in_window(const FieldTrace& trace, double start,
                              double window);

/// Coherent-state (Poissonian) click model:
/// P = 1 - (1 - dark_prob) * exp(-efficiency * mu).
double click_probability(double mu, const DetectorSpec& det);

/// Per-shot click records for n_shots repetitions at a fixed mean photon
/// number; `phase_setting` is carried through for bookkeeping.
std::vector<DetectionRecord> record_clicks(double mu_per_shot,
                                           const DetectorSpec& det,
                                           std::size_t n_shots,
                                           double phase_setting,
                                           RngStream& rng);

/// Count of Bernoulli(click_probability(mu)) successes over n_shots.
std::size_t monte_carlo_clicks(double mu_per_shot, const DetectorSpec& det,
                               std::size_t n_shots, RngStream& rng);

/// Classical power trace: |a|^2 * (hc/lambda) + noise_floor, with 10%
/// relative Gaussian fluctuation on the floor per sample.
std::vector<double> classical_readout(const FieldTrace& trace,
                                      const DetectorSpec& det,
                                      RngStream& rng);

} // namespace fidsim
