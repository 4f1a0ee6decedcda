#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "fidsim/scenario.hpp"

namespace fidsim {

using nlohmann::json;

namespace {

// %.17g round-trips doubles and keeps every emitted file byte-stable.
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Reader that rejects unknown keys so config typos fail loudly.
class Fields {
public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object())
      throw std::invalid_argument(where_ + ": expected an object");
  }

  template <typename T>
  T get(const std::string& key, const T& fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument(where_ + "." + key + ": wrong type");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json* sub(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key()))
        throw std::invalid_argument(where_ + ": unknown key '" + item.key() +
                                    "'");
  }

private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

MediumSpec medium_from_json(const json& j, const std::string& where,
                            const MediumSpec& defaults) {
  Fields f(j, where);
  MediumSpec m = defaults;
  m.label = f.get<std::string>("label", m.label);
  m.optical_depth = f.get<double>("optical_depth", m.optical_depth);
  m.t1 = f.get<double>("t1_s", m.t1);
  m.t2 = f.get<double>("t2_s", m.t2);
  m.length = f.get<double>("length_m", m.length);
  m.inhomogeneous_fwhm =
      f.get<double>("inhomogeneous_fwhm_hz", m.inhomogeneous_fwhm);
  m.drive_scale = f.get<double>("drive_scale", m.drive_scale);
  f.finish();
  return m;
}

json medium_to_json(const MediumSpec& m) {
  return json{{"label", m.label},
              {"optical_depth", m.optical_depth},
              {"t1_s", m.t1},
              {"t2_s", m.t2},
              {"length_m", m.length},
              {"inhomogeneous_fwhm_hz", m.inhomogeneous_fwhm},
              {"drive_scale", m.drive_scale}};
}

} // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                e.what());
  }

  ScenarioConfig cfg;
  Fields root(j, "config");
  cfg.name = root.get<std::string>("name", cfg.name);
  cfg.mode = scenario_mode_from_string(
      root.get<std::string>("mode", to_string(cfg.mode)));

  if (const json* p = root.sub("pulse")) {
    Fields f(*p, "pulse");
    cfg.pulse.shape = pulse_shape_from_string(
        f.get<std::string>("shape", to_string(cfg.pulse.shape)));
    cfg.pulse.duration = f.get<double>("duration_s", cfg.pulse.duration);
    cfg.pulse.peak_power = f.get<double>("peak_power_w", cfg.pulse.peak_power);
    cfg.pulse.carrier_wavelength =
        f.get<double>("carrier_wavelength_m", cfg.pulse.carrier_wavelength);
    cfg.pulse.carrier_detuning =
        f.get<double>("carrier_detuning_hz", cfg.pulse.carrier_detuning);
    f.finish();
  }

  if (const json* p = root.sub("arms")) {
    if (!p->is_array() || p->size() != 2)
      throw std::invalid_argument("arms: expected exactly 2 entries");
    cfg.arms[0] = medium_from_json((*p)[0], "arms[0]", cfg.arms[0]);
    cfg.arms[1] = medium_from_json((*p)[1], "arms[1]", cfg.arms[1]);
  }

  if (const json* p = root.sub("magnet_off")) {
    if (!p->is_array() || p->size() != 2)
      throw std::invalid_argument("magnet_off: expected exactly 2 booleans");
    cfg.magnet_off = {(*p)[0].get<bool>(), (*p)[1].get<bool>()};
  }
  cfg.magnet_off_t2_scale =
      root.get<double>("magnet_off_t2_scale", cfg.magnet_off_t2_scale);

  if (const json* p = root.sub("grid")) {
    Fields f(*p, "grid");
    cfg.grid_profile = line_profile_from_string(
        f.get<std::string>("profile", to_string(cfg.grid_profile)));
    cfg.grid_span = f.get<double>("span_hz", cfg.grid_span);
    cfg.grid_classes = f.get<std::size_t>("n_classes", cfg.grid_classes);
    f.finish();
  }
  cfg.n_slices = root.get<std::size_t>("n_slices", cfg.n_slices);

  if (const json* p = root.sub("interferometer")) {
    Fields f(*p, "interferometer");
    auto& ifo = cfg.interferometer;
    ifo.split_ratio_in = f.get<double>("split_ratio_in", ifo.split_ratio_in);
    ifo.split_ratio_out = f.get<double>("split_ratio_out", ifo.split_ratio_out);
    const std::vector<double> losses = f.get<std::vector<double>>(
        "arm_loss_db", {ifo.arm_loss_db[0], ifo.arm_loss_db[1]});
    if (losses.size() != 2)
      throw std::invalid_argument("interferometer.arm_loss_db: expected 2");
    ifo.arm_loss_db = {losses[0], losses[1]};
    ifo.loss_split_fraction =
        f.get<double>("loss_split_fraction", ifo.loss_split_fraction);
    ifo.post_loss_db = f.get<double>("post_loss_db", ifo.post_loss_db);
    ifo.phase = f.get<double>("phase_rad", ifo.phase);
    ifo.phase_noise_sigma =
        f.get<double>("phase_noise_sigma_rad", ifo.phase_noise_sigma);
    const std::vector<double> pol = f.get<std::vector<double>>(
        "polarization_factor",
        {ifo.polarization_factor[0], ifo.polarization_factor[1]});
    if (pol.size() != 2)
      throw std::invalid_argument(
          "interferometer.polarization_factor: expected 2");
    ifo.polarization_factor = {pol[0], pol[1]};
    f.finish();
  }

  if (const json* p = root.sub("gate")) {
    Fields f(*p, "gate");
    cfg.gate.open_delay = f.get<double>("open_delay_s", cfg.gate.open_delay);
    cfg.gate.open_duration =
        f.get<double>("open_duration_s", cfg.gate.open_duration);
    cfg.gate.extinction_db =
        f.get<double>("extinction_db", cfg.gate.extinction_db);
    f.finish();
  }

  if (const json* p = root.sub("detector")) {
    Fields f(*p, "detector");
    cfg.detector.kind = detector_kind_from_string(
        f.get<std::string>("kind", to_string(cfg.detector.kind)));
    cfg.detector.efficiency =
        f.get<double>("efficiency", cfg.detector.efficiency);
    cfg.detector.dark_prob = f.get<double>("dark_prob", cfg.detector.dark_prob);
    cfg.detector.window = f.get<double>("window_s", cfg.detector.window);
    cfg.detector.noise_floor =
        f.get<double>("noise_floor_w", cfg.detector.noise_floor);
    cfg.detector.wavelength =
        f.get<double>("wavelength_m", cfg.detector.wavelength);
    f.finish();
  }
  cfg.window_start_after_pulse = root.get<double>(
      "window_start_after_pulse_s", cfg.window_start_after_pulse);

  cfg.flux_scale = root.get<double>("flux_scale", cfg.flux_scale);
  cfg.target_mu = root.get<double>("target_mu", cfg.target_mu);

  if (const json* p = root.sub("scan")) {
    Fields f(*p, "scan");
    cfg.scan.n_points = f.get<std::size_t>("n_points", cfg.scan.n_points);
    cfg.scan.shots_per_point =
        f.get<std::size_t>("shots_per_point", cfg.scan.shots_per_point);
    cfg.scan.phase_span = f.get<double>("phase_span_rad", cfg.scan.phase_span);
    cfg.scan.control_shots =
        f.get<std::size_t>("control_shots", cfg.scan.control_shots);
    f.finish();
  }

  cfg.pre_pad = root.get<double>("pre_pad_s", cfg.pre_pad);
  cfg.post_pad = root.get<double>("post_pad_s", cfg.post_pad);
  cfg.dt_override = root.get<double>("dt_s", cfg.dt_override);
  cfg.seed = root.get<std::uint64_t>("seed", cfg.seed);
  cfg.out_dir = root.get<std::string>("out_dir", cfg.out_dir);
  root.finish();

  cfg.validate();
  return cfg;
}

std::string config_to_json_text(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["mode"] = to_string(cfg.mode);
  j["pulse"] = {{"shape", to_string(cfg.pulse.shape)},
                {"duration_s", cfg.pulse.duration},
                {"peak_power_w", cfg.pulse.peak_power},
                {"carrier_wavelength_m", cfg.pulse.carrier_wavelength},
                {"carrier_detuning_hz", cfg.pulse.carrier_detuning}};
  j["arms"] = {medium_to_json(cfg.arms[0]), medium_to_json(cfg.arms[1])};
  j["magnet_off"] = {cfg.magnet_off[0], cfg.magnet_off[1]};
  j["magnet_off_t2_scale"] = cfg.magnet_off_t2_scale;
  j["grid"] = {{"profile", to_string(cfg.grid_profile)},
               {"span_hz", cfg.grid_span},
               {"n_classes", cfg.grid_classes}};
  j["n_slices"] = cfg.n_slices;
  const auto& ifo = cfg.interferometer;
  j["interferometer"] = {
      {"split_ratio_in", ifo.split_ratio_in},
      {"split_ratio_out", ifo.split_ratio_out},
      {"arm_loss_db", {ifo.arm_loss_db[0], ifo.arm_loss_db[1]}},
      {"loss_split_fraction", ifo.loss_split_fraction},
      {"post_loss_db", ifo.post_loss_db},
      {"phase_rad", ifo.phase},
      {"phase_noise_sigma_rad", ifo.phase_noise_sigma},
      {"polarization_factor",
       {ifo.polarization_factor[0], ifo.polarization_factor[1]}}};
  j["gate"] = {{"open_delay_s", cfg.gate.open_delay},
               {"open_duration_s", cfg.gate.open_duration},
               {"extinction_db", cfg.gate.extinction_db}};
  j["detector"] = {{"kind", to_string(cfg.detector.kind)},
                   {"efficiency", cfg.detector.efficiency},
                   {"dark_prob", cfg.detector.dark_prob},
                   {"window_s", cfg.detector.window},
                   {"noise_floor_w", cfg.detector.noise_floor},
                   {"wavelength_m", cfg.detector.wavelength}};
  j["window_start_after_pulse_s"] = cfg.window_start_after_pulse;
  j["flux_scale"] = cfg.flux_scale;
  j["target_mu"] = cfg.target_mu;
  j["scan"] = {{"n_points", cfg.scan.n_points},
               {"shots_per_point", cfg.scan.shots_per_point},
               {"phase_span_rad", cfg.scan.phase_span},
               {"control_shots", cfg.scan.control_shots}};
  j["pre_pad_s"] = cfg.pre_pad;
  j["post_pad_s"] = cfg.post_pad;
  j["dt_s"] = cfg.dt_override;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2) + "\n";
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return config_from_json_text(text);
}

std::string apply_config_override(const std::string& json_text,
                                  const std::string& key_eq_value) {
  const auto eq = key_eq_value.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("--set expects key.path=value, got '" +
                                key_eq_value + "'");
  const std::string path = key_eq_value.substr(0, eq);
  const std::string value = key_eq_value.substr(eq + 1);

  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                e.what());
  }

  // Dotted path with numeric components indexing arrays.
  json* node = &j;
  std::size_t begin = 0;
  std::vector<std::string> parts;
  while (begin <= path.size()) {
    const auto dot = path.find('.', begin);
    parts.push_back(path.substr(begin, dot - begin));
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const std::string& key = parts[i];
    if (node->is_array()) {
      node = &(*node)[static_cast<std::size_t>(std::stoul(key))];
    } else {
      node = &(*node)[key];
    }
  }
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value; // plain string
  }
  const std::string& leaf = parts.back();
  if (node->is_array())
    (*node)[static_cast<std::size_t>(std::stoul(leaf))] = parsed;
  else
    (*node)[leaf] = parsed;
  return j.dump(2) + "\n";
}

bool ScenarioResult::anchors_pass() const {
  for (const auto& a : anchors)
    if (a.hard && !a.pass) return false;
  return true;
}

namespace {

void write_trace_csv(const std::filesystem::path& path, const TraceTable& t) {
  std::ofstream out(path);
  out << "time_s," << (t.unit.empty() ? "value" : t.unit) << "\n";
  for (std::size_t i = 0; i < t.time.size(); ++i)
    out << fmt(t.time[i]) << "," << fmt(t.value[i]) << "\n";
}

} // namespace

void write_result(const ScenarioResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  {
    std::ofstream out(dir / "fringe.csv");
    out << "phase_rad,mean_value,stderr,n_shots\n";
    for (const auto& p : result.fringe)
      out << fmt(p.phase) << "," << fmt(p.mean_value) << ","
          << fmt(p.std_error) << "," << p.n_shots << "\n";
  }

  write_trace_csv(dir / "trace_constructive.csv", result.trace_constructive);
  write_trace_csv(dir / "trace_destructive.csv", result.trace_destructive);

  {
    std::ofstream out(dir / "fit.txt");
    out << "scenario: " << result.scenario << "\n";
    out << "n_points: " << result.fit.n_points << "\n";
    out << "offset: " << fmt(result.fit.offset) << "\n";
    out << "amplitude: " << fmt(result.fit.amplitude) << "\n";
    out << "phase_origin_rad: " << fmt(result.fit.phase_origin) << "\n";
    out << "visibility: " << fmt(result.fit.visibility) << "\n";
    out << "visibility_stderr: " << fmt(result.fit.visibility_stderr) << "\n";
    out << "net_visibility: " << fmt(result.net_vis) << "\n";
    out << "net_visibility_stderr: " << fmt(result.net_vis_stderr) << "\n";
    out << "residual_rms: " << fmt(result.fit.residual_rms) << "\n";
    for (const auto& [key, value] : result.metrics)
      out << key << ": " << fmt(value) << "\n";
  }

  {
    std::ofstream out(dir / "anchors.txt");
    out << "# anchor measured target_lo target_hi status note\n";
    for (const auto& a : result.anchors)
      out << a.name << " " << fmt(a.measured) << " " << fmt(a.target_lo) << " "
          << fmt(a.target_hi) << " "
          << (a.hard ? (a.pass ? "PASS" : "FAIL") : "INFO")
          << (a.note.empty() ? "" : " # " + a.note) << "\n";
  }
}

} // namespace fidsim
