#pragma once

#include <vector>

#include "fidsim/bloch.hpp"
#include "fidsim/field.hpp"
#include "fidsim/grid.hpp"

namespace fidsim {

/// Couples the photon-flux field to the atoms.
///
/// drive: Omega = flux_to_rabi * a (rad/s per sqrt(photons/s)), taken from
/// MediumSpec::drive_scale.
///
/// feedback: da/dz = field_coupling/2 * sum_k weight_k (v_k + i u_k),
/// with field_coupling fixed by requiring the analytic weak-field limit to
/// reproduce Beer-Lambert power transmission exp(-optical_depth) over the
/// medium length:
///   field_coupling = optical_depth / (pi * g0 * length * flux_to_rabi)
/// where g0 is the grid's spectral density at line center. The drive scale
/// therefore never moves the weak-field optical depth; it only sets where
/// saturation begins.
struct CouplingCalibration {
  double flux_to_rabi = 0.0;   // rad/s per sqrt(photons/s)
  double field_coupling = 0.0; // sqrt(photons/s) per meter, per unit coherence

  static CouplingCalibration make(const MediumSpec& medium,
                                  const DetuningGrid& grid);
};

struct PropagationResult {
  FieldTrace output;                          // same time base as the input
  std::vector<BlochEnsembleState> final_state; // one per slice, input side first
};

/// Marches the field through `n_slices` slabs in the retarded frame
/// (z-outer, t-inner upwind with a midpoint drive correction), integrating
/// the Bloch equations of every detuning class per slab. Causal by
/// construction: slab k only ever sees field emitted by slabs < k.
///
/// `carrier_detuning` (Hz) offsets every grid detuning by
/// -2*pi*carrier_detuning, i.e. the laser is moved, not the line.
///
/// Throws if the trace step violates the Bloch stability guard for the
/// fastest class, or if the grid span is narrower than 10x the drive's
/// spectral content.
PropagationResult propagate(const FieldTrace& input, const MediumSpec& medium,
                            const DetuningGrid& grid, std::size_t n_slices,
                            double carrier_detuning = 0.0);

/// Step size propagate() accepts for this input (smaller of the Bloch
/// guard with safety margin and the relaxation limits).
double propagation_max_dt(const MediumSpec& medium, const DetuningGrid& grid,
                          double peak_flux, double carrier_detuning = 0.0);

/// True when the carrier sits so far outside the gridded line that the
/// medium response is negligible (scattered-energy bound < 1e-12) and
/// propagate() returns the input unchanged.
bool carrier_far_detuned(const MediumSpec& medium, const DetuningGrid& grid,
                         double peak_flux, double carrier_detuning);

/// Sub-trace strictly after `pulse_end`; its energy is the photon number
/// of the collective emission. Throws if pulse_end is outside the trace.
FieldTrace extract_fid(const FieldTrace& output, double pulse_end);

/// 1/e time of |a(t)|^2 from an intensity-weighted least-squares
/// exponential fit over the first decade of decay past the global
/// intensity peak. Throws on zero-energy or non-decaying input.
double fid_decay_time(const FieldTrace& fid);

} // namespace fidsim
