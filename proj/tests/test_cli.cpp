// End-to-end checks of the simulate executable: exit codes, overrides,
// output files, and scalar-vs-vector kernel agreement through the whole
// pipeline.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FIDSIM_SIMULATE_BIN) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string configs_dir() { return FIDSIM_CONFIG_DIR; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double grep_metric(const fs::path& fit_txt, const std::string& key) {
  std::ifstream in(fit_txt);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + ":", 0) == 0)
      return std::stod(line.substr(key.size() + 1));
  }
  return std::nan("");
}

} // namespace

TEST_CASE("exit code 0 on success and expected files written") {
  const fs::path out = fs::temp_directory_path() / "fidsim_cli_ok";
  fs::remove_all(out);
  const int rc = run_cli(configs_dir() + "/low_excitation.json" +
                         " --set scan.shots_per_point=50" +
                         " --set scan.control_shots=100 --out " + out.string());
  CHECK(rc == 0);
  for (const char* name : {"fringe.csv", "trace_constructive.csv",
                           "trace_destructive.csv", "fit.txt", "anchors.txt"})
    CHECK(fs::exists(out / name));
  fs::remove_all(out);
}

TEST_CASE("exit code 1 on config errors") {
  CHECK(run_cli("definitely_not_a_scenario") == 1);
  const fs::path bad = fs::temp_directory_path() / "fidsim_bad.json";
  std::ofstream(bad) << "{\"grid\": {\"n_classes\": 4}}";
  CHECK(run_cli(bad.string()) == 1);
  std::ofstream(bad) << "{\"bogus_key\": true}";
  CHECK(run_cli(bad.string()) == 1);
  fs::remove(bad);
  // Unknown --set paths and malformed values are config errors too.
  CHECK(run_cli(configs_dir() + "/low_excitation.json --set nope=1") == 1);
}

TEST_CASE("exit code 2 on run-level numerical failure") {
  // Asking the off-resonance control to calibrate a photon target cannot
  // be satisfied (no detected signal) and aborts the run.
  const int rc = run_cli(configs_dir() + "/off_resonance.json" +
                         " --set target_mu=3.0 --out /tmp/fidsim_cli_mu");
  CHECK(rc == 2);
  // A user-forced step size that violates the stability guard is flagged
  // as a bad config field instead.
  const int rc2 = run_cli(configs_dir() + "/low_excitation.json" +
                          " --set dt_s=1e-6 --out /tmp/fidsim_cli_dt");
  CHECK(rc2 == 1);
  fs::remove_all("/tmp/fidsim_cli_mu");
  fs::remove_all("/tmp/fidsim_cli_dt");
}

TEST_CASE("exit code 3 when --check-anchors sees a failing anchor") {
  const fs::path out = fs::temp_directory_path() / "fidsim_cli_anchor";
  // Detuning the low-excitation run by a little kills the constructive
  // click-probability anchor while the run itself still succeeds.
  const int rc = run_cli(configs_dir() + "/low_excitation.json" +
                         " --check-anchors --set target_mu=0.5 --out " +
                         out.string());
  CHECK(rc == 3);
  // Same run without --check-anchors reports success.
  const int rc2 = run_cli(configs_dir() + "/low_excitation.json" +
                          " --set target_mu=0.5 --out " + out.string());
  CHECK(rc2 == 0);
  fs::remove_all(out);
}

TEST_CASE("--list-scenarios finds the builtin configs") {
  const std::string cmd = std::string("FIDSIM_CONFIG_DIR=") + configs_dir() +
                          " " + FIDSIM_SIMULATE_BIN +
                          " --list-scenarios > /tmp/fidsim_list.txt 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  const std::string listing = slurp("/tmp/fidsim_list.txt");
  for (const char* name : {"high_excitation", "low_excitation", "off_resonance",
                           "single_arm", "both_arms_off", "cw_calibration"})
    CHECK(listing.find(name) != std::string::npos);
  fs::remove("/tmp/fidsim_list.txt");
}

TEST_CASE("scalar and avx2 kernels agree through the full pipeline") {
  const fs::path out_a = fs::temp_directory_path() / "fidsim_scalar";
  const fs::path out_b = fs::temp_directory_path() / "fidsim_vector";
  fs::remove_all(out_a);
  fs::remove_all(out_b);
  const std::string base = std::string(FIDSIM_SIMULATE_BIN) +
                           " " + configs_dir() + "/high_excitation.json" +
                           " --set scan.shots_per_point=200" +
                           " --set scan.control_shots=200";
  REQUIRE(std::system((std::string("FIDSIM_KERNEL=scalar ") + base + " --out " +
                       out_a.string() + " > /dev/null 2>&1")
                          .c_str()) == 0);
  REQUIRE(std::system((std::string("FIDSIM_KERNEL=avx2 ") + base + " --out " +
                       out_b.string() + " > /dev/null 2>&1")
                          .c_str()) == 0);
  const double v_a = grep_metric(out_a / "fit.txt", "visibility");
  const double v_b = grep_metric(out_b / "fit.txt", "visibility");
  REQUIRE(std::isfinite(v_a));
  // Same dynamics up to FMA rounding: fringe observables must agree far
  // below their statistical uncertainty.
  CHECK(std::abs(v_a - v_b) < 1e-6);
  const double d_a = grep_metric(out_a / "fit.txt", "arm1_fid_decay_s");
  const double d_b = grep_metric(out_b / "fit.txt", "arm1_fid_decay_s");
  CHECK(std::abs(d_a - d_b) < 1e-12);
  fs::remove_all(out_a);
  fs::remove_all(out_b);
}
