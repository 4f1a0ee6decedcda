#include "fidsim/detection.hpp"

#include <cmath>
#include <stdexcept>

#include "fidsim/units.hpp"

namespace fidsim {

void GateSpec::validate() const {
  if (open_delay < 0.0 || open_duration < 0.0)
    throw std::invalid_argument("gate: delay and duration must be >= 0");
  if (extinction_db < 0.0)
    throw std::invalid_argument("gate: extinction_db must be >= 0");
}

DetectorKind detector_kind_from_string(const std::string& s) {
  if (s == "classical") return DetectorKind::classical;
  if (s == "single_photon") return DetectorKind::single_photon;
  throw std::invalid_argument("unknown detector kind: " + s);
}

std::string to_string(DetectorKind k) {
  return k == DetectorKind::classical ? "classical" : "single_photon";
}

void DetectorSpec::validate() const {
  if (efficiency < 0.0 || efficiency > 1.0)
    throw std::invalid_argument("detector: efficiency must be in [0,1]");
  if (dark_prob < 0.0 || dark_prob > 1.0)
    throw std::invalid_argument("detector: dark_prob must be in [0,1]");
  if (!(window > 0.0))
    throw std::invalid_argument("detector: window must be > 0");
  if (noise_floor < 0.0)
    throw std::invalid_argument("detector: noise_floor must be >= 0");
  if (!(wavelength > 0.0))
    throw std::invalid_argument("detector: wavelength must be > 0");
}

FieldTrace gate(const FieldTrace& trace, const GateSpec& gate_spec,
                double pulse_end) {
  gate_spec.validate();
  const double open_at = pulse_end + gate_spec.open_delay;
  const double close_at = open_at + gate_spec.open_duration;
  if (open_at < trace.t0 || close_at > trace.t_end())
    throw std::invalid_argument("gate: window outside trace span");

  const double closed_amp = std::isinf(gate_spec.extinction_db)
                                ? 0.0
                                : db_to_amplitude(gate_spec.extinction_db);
  FieldTrace out = trace;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double t = out.time_at(i);
    if (t < open_at || t >= close_at) out.samples[i] *= closed_amp;
  }
  return out;
}

double mean_photons_in_window(const FieldTrace& trace, double start,
                              double window) {
  if (!(window > 0.0))
    throw std::invalid_argument("mean_photons_in_window: window must be > 0");
  if (start < trace.t0 || start + window > trace.t_end() + 0.5 * trace.dt)
    throw std::invalid_argument("mean_photons_in_window: window outside trace");
  return trace.energy_in(start, start + window);
}

double click_probability(double mu, const DetectorSpec& det) {
  if (!(mu >= 0.0))
    throw std::invalid_argument("click_probability: mu must be >= 0");
  return 1.0 - (1.0 - det.dark_prob) * std::exp(-det.efficiency * mu);
}

std::vector<DetectionRecord> record_clicks(double mu_per_shot,
                                           const DetectorSpec& det,
                                           std::size_t n_shots,
                                           double phase_setting,
                                           RngStream& rng) {
  const double p = click_probability(mu_per_shot, det);
  std::vector<DetectionRecord> records(n_shots);
  for (std::size_t i = 0; i < n_shots; ++i)
    records[i] = {i, phase_setting, rng.bernoulli(p)};
  return records;
}

std::size_t monte_carlo_clicks(double mu_per_shot, const DetectorSpec& det,
                               std::size_t n_shots, RngStream& rng) {
  std::size_t clicks = 0;
  for (const auto& r : record_clicks(mu_per_shot, det, n_shots, 0.0, rng))
    if (r.clicked) ++clicks;
  return clicks;
}

std::vector<double> classical_readout(const FieldTrace& trace,
                                      const DetectorSpec& det,
                                      RngStream& rng) {
  if (det.kind != DetectorKind::classical)
    throw std::invalid_argument("classical_readout: detector is not classical");
  const double eph = photon_energy(det.wavelength);
  std::vector<double> power(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    double p = std::norm(trace.samples[i]) * eph;
    if (det.noise_floor > 0.0)
      p += det.noise_floor * (1.0 + 0.1 * rng.normal());
    power[i] = p;
  }
  return power;
}

} // namespace fidsim
