#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fidsim/analysis.hpp"
#include "fidsim/bloch.hpp"
#include "fidsim/detection.hpp"
#include "fidsim/field.hpp"
#include "fidsim/grid.hpp"
#include "fidsim/interferometer.hpp"

namespace fidsim {

enum class ScenarioMode { standard, single_arm, cw_calibration };

ScenarioMode scenario_mode_from_string(const std::string& s);
std::string to_string(ScenarioMode m);

struct ScanSpec {
  std::size_t n_points = 17;         // evenly spaced over phase_span
  std::size_t shots_per_point = 200;
  double phase_span = 6.6759;        // rad, slightly more than 2 pi
  std::size_t control_shots = 6400;  // constructive/destructive statistics
};

/// Declarative description of one run. A run is a pure function of
/// (config, seed); every stochastic draw comes from a substream derived
/// from (seed, point, shot).
struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioMode mode = ScenarioMode::standard;

  PulseSpec pulse;
  std::array<MediumSpec, 2> arms = {default_waveguide_i(),
                                    default_waveguide_i()};
  // "Magnet off" control: multiplies that arm's T2 by magnet_off_t2_scale,
  // which kills the collective emission well before the detection window.
  std::array<bool, 2> magnet_off = {false, false};
  double magnet_off_t2_scale = 1e-3;

  LineProfile grid_profile = LineProfile::flat;
  double grid_span = 20e6;        // Hz
  std::size_t grid_classes = 201;
  std::size_t n_slices = 64;

  InterferometerSpec interferometer;
  GateSpec gate;
  DetectorSpec detector;
  // Start of the single-photon counting window, measured from pulse end.
  double window_start_after_pulse = 1e-6;

  // Detector-plane photon-flux calibration. If target_mu > 0 the runner
  // solves for the scale that puts the constructive-phase window mean at
  // target_mu photons and reports the applied value; otherwise flux_scale
  // is used as given.
  double flux_scale = 1.0;
  double target_mu = 0.0;

  ScanSpec scan;
  double pre_pad = 1e-7;  // s of zero field before the pulse
  double post_pad = 2e-6; // s of observation window after the pulse
  double dt_override = 0.0; // s; 0 = derive from the stability guard

  std::uint64_t seed = 1;
  std::string out_dir; // empty = results/<name>

  void validate() const; // throws std::invalid_argument with field names
  MediumSpec effective_arm(std::size_t idx) const;
};

struct FringePoint {
  double phase = 0.0;
  double mean_value = 0.0;
  double std_error = 0.0;
  std::size_t n_shots = 0;
};

struct AnchorCheck {
  std::string name;
  double measured = 0.0;
  double target_lo = 0.0;
  double target_hi = 0.0;
  bool hard = true; // false: reported without a pass threshold
  bool pass = true;
  std::string note;
};

struct TraceTable {
  std::vector<double> time;   // s
  std::vector<double> value;
  std::string unit;           // "power_w" or "photon_flux"
};

struct ScenarioResult {
  std::string scenario;
  std::vector<FringePoint> fringe;
  FringeFit fit;
  double net_vis = 0.0;
  double net_vis_stderr = 0.0;
  TraceTable trace_constructive;
  TraceTable trace_destructive;
  std::vector<AnchorCheck> anchors;
  // Named scalar diagnostics (applied flux scale, FID decay times,
  // constructive-window photon numbers, control ratios, ...). Ordered so
  // output files are reproducible byte for byte.
  std::map<std::string, double> metrics;

  bool anchors_pass() const;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// Runs the configured control (>= one arm with magnet_off) against an
/// all-magnets-on reference and reports the constructive-signal ratio and
/// the flatness of the control fringe.
ScenarioResult run_control_single_arm(const ScenarioConfig& config);

/// Transmission-only fringe with zero optical depth in both arms;
/// reports visibility with and without phase noise.
ScenarioResult run_cw_calibration(const ScenarioConfig& config);

/// Dispatch on config.mode.
ScenarioResult run(const ScenarioConfig& config);

// --- configuration and result I/O (JSON config, CSV/text outputs) ---

ScenarioConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ScenarioConfig& config);
ScenarioConfig load_config(const std::string& path);

/// Applies one "--set dotted.path=value" override to raw JSON text.
std::string apply_config_override(const std::string& json_text,
                                  const std::string& key_eq_value);

/// Writes fringe.csv, trace_constructive.csv, trace_destructive.csv,
/// fit.txt and anchors.txt under out_dir (created if needed).
void write_result(const ScenarioResult& result, const std::string& out_dir);

} // namespace fidsim
