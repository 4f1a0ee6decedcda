#pragma once

#include <array>
#include <utility>

#include "fidsim/field.hpp"
#include "fidsim/rng.hpp"

namespace fidsim {

/// Fiber Mach-Zehnder network around the two media: splitting ratios,
/// per-arm losses, a controllable phase on arm 2, per-shot phase noise
/// from the cooler vibrations, and a scalar polarization projection per
/// arm.
struct InterferometerSpec {
  double split_ratio_in = 0.5;  // power fraction sent to arm 1
  double split_ratio_out = 0.5; // combiner bar-coupling for arm 1
  std::array<double, 2> arm_loss_db = {14.0, 14.0};
  // Fraction of each arm's loss placed before its medium (input coupling);
  // the rest follows the medium. Matters because the input share also
  // attenuates the drive.
  double loss_split_fraction = 0.5;
  double post_loss_db = 8.0; // gate + polarizer, combiner to detector
  double phase = 0.0;        // rad, PZT setting, applied to arm 2
  double phase_noise_sigma = 0.0;          // rad per shot
  std::array<double, 2> polarization_factor = {1.0, 1.0}; // amplitude

  void validate() const;
};

/// Deterministic phase plus the sampled noise offset for one repetition.
struct ShotPhase {
  double phase = 0.0;        // spec.phase
  double noise_offset = 0.0; // fresh N(0, sigma) draw
  double total() const { return phase + noise_offset; }
};

// Splitter convention, fixed project-wide: a lossless coupler with power
// ratio r has transfer matrix [sqrt(r), i*sqrt(1-r); i*sqrt(1-r), sqrt(r)],
// i.e. the cross port picks up a factor i. With equal arms the detected
// port is brightest when the arm-2 phase is -pi/2.

/// Lossless input splitter: arm1 = sqrt(r) * input, arm2 = sqrt(1-r) * input.
std::pair<FieldTrace, FieldTrace> split(const FieldTrace& input,
                                        const InterferometerSpec& spec);

/// One arm's amplitude transform: 10^(-loss_db/20) * pol * e^{i phase}.
FieldTrace apply_arm(const FieldTrace& trace, double loss_db, double phase,
                     double polarization_factor);

/// Output coupler, detected port only:
/// sqrt(r) * arm1 + i * sqrt(1-r) * arm2.
FieldTrace combine(const FieldTrace& arm1, const FieldTrace& arm2,
                   const InterferometerSpec& spec);

/// Both output ports (detected, open); together they conserve energy.
std::pair<FieldTrace, FieldTrace> combine_both(const FieldTrace& arm1,
                                               const FieldTrace& arm2,
                                               const InterferometerSpec& spec);

/// Fresh per-shot phase: spec.phase plus N(0, phase_noise_sigma).
ShotPhase sample_shot_phase(const InterferometerSpec& spec, RngStream& rng);

/// sigma = sqrt(-2 ln V): Gaussian-dephasing inversion of V = e^{-sigma^2/2}.
/// Throws unless 0 < target_visibility <= 1.
double calibrate_phase_noise(double target_visibility);

} // namespace fidsim
