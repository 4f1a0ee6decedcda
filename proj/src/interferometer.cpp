#include "fidsim/interferometer.hpp"

#include <cmath>
#include <stdexcept>

#include "fidsim/units.hpp"

namespace fidsim {

void InterferometerSpec::validate() const {
  if (!(split_ratio_in > 0.0) || !(split_ratio_in < 1.0) ||
      !(split_ratio_out > 0.0) || !(split_ratio_out < 1.0))
    throw std::invalid_argument("interferometer: split ratios must be in (0,1)");
  if (arm_loss_db[0] < 0.0 || arm_loss_db[1] < 0.0 || post_loss_db < 0.0)
    throw std::invalid_argument("interferometer: losses must be >= 0");
  if (loss_split_fraction < 0.0 || loss_split_fraction > 1.0)
    throw std::invalid_argument(
        "interferometer: loss_split_fraction must be in [0,1]");
  if (phase_noise_sigma < 0.0)
    throw std::invalid_argument("interferometer: phase_noise_sigma must be >= 0");
  for (double p : polarization_factor)
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument(
          "interferometer: polarization_factor must be in [0,1]");
}

std::pair<FieldTrace, FieldTrace> split(const FieldTrace& input,
                                        const InterferometerSpec& spec) {
  spec.validate();
  const double c1 = std::sqrt(spec.split_ratio_in);
  const double c2 = std::sqrt(1.0 - spec.split_ratio_in);
  FieldTrace arm1 = input, arm2 = input;
  for (std::size_t i = 0; i < input.size(); ++i) {
    arm1.samples[i] = c1 * input.samples[i];
    arm2.samples[i] = c2 * input.samples[i];
  }
  return {std::move(arm1), std::move(arm2)};
}

FieldTrace apply_arm(const FieldTrace& trace, double loss_db, double phase,
                     double polarization_factor) {
  const std::complex<double> factor =
      db_to_amplitude(loss_db) * polarization_factor *
      std::exp(std::complex<double>(0.0, phase));
  FieldTrace out = trace;
  for (auto& a : out.samples) a *= factor;
  return out;
}

std::pair<FieldTrace, FieldTrace> combine_both(const FieldTrace& arm1,
                                               const FieldTrace& arm2,
                                               const InterferometerSpec& spec) {
  if (!arm1.same_time_base(arm2))
    throw std::invalid_argument("combine: arm time bases differ");
  const double r = spec.split_ratio_out;
  const std::complex<double> bar(std::sqrt(r), 0.0);
  const std::complex<double> cross(0.0, std::sqrt(1.0 - r));
  FieldTrace detected = arm1, open = arm1;
  for (std::size_t i = 0; i < arm1.size(); ++i) {
    detected.samples[i] = bar * arm1.samples[i] + cross * arm2.samples[i];
    open.samples[i] = cross * arm1.samples[i] + bar * arm2.samples[i];
  }
  return {std::move(detected), std::move(open)};
}

FieldTrace combine(const FieldTrace& arm1, const FieldTrace& arm2,
                   const InterferometerSpec& spec) {
  return combine_both(arm1, arm2, spec).first;
}

ShotPhase sample_shot_phase(const InterferometerSpec& spec, RngStream& rng) {
  ShotPhase shot;
  shot.phase = spec.phase;
  shot.noise_offset =
      spec.phase_noise_sigma > 0.0 ? spec.phase_noise_sigma * rng.normal()
                                   : 0.0;
  return shot;
}

double calibrate_phase_noise(double target_visibility) {
  if (!(target_visibility > 0.0) || target_visibility > 1.0)
    throw std::invalid_argument(
        "calibrate_phase_noise: target must be in (0, 1]");
  return std::sqrt(-2.0 * std::log(target_visibility));
}

} // namespace fidsim
