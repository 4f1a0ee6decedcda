// Command-line front end: loads a scenario config, runs it and writes the
// result tables. Exit codes: 0 success, 1 config error, 2 numerical
// failure, 3 anchor-check failure (with --check-anchors).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fidsim/kernels.hpp"
#include "fidsim/scenario.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> config_search_dirs(const char* argv0) {
  std::vector<fs::path> dirs;
  if (const char* env = std::getenv("FIDSIM_CONFIG_DIR")) dirs.push_back(env);
  dirs.push_back("configs");
  std::error_code ec;
  fs::path exe = fs::canonical(argv0, ec);
  if (!ec) {
    dirs.push_back(exe.parent_path() / "configs");
    dirs.push_back(exe.parent_path().parent_path() / "configs");
    dirs.push_back(exe.parent_path().parent_path().parent_path() / "configs");
  }
  return dirs;
}

fs::path resolve_config(const std::string& arg, const char* argv0) {
  if (fs::exists(arg)) return arg;
  for (const auto& dir : config_search_dirs(argv0)) {
    const fs::path candidate = dir / (arg + ".json");
    if (fs::exists(candidate)) return candidate;
    const fs::path plain = dir / arg;
    if (fs::exists(plain)) return plain;
  }
  throw std::invalid_argument("config not found: " + arg);
}

int list_scenarios(const char* argv0) {
  bool found = false;
  for (const auto& dir : config_search_dirs(argv0)) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) continue;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".json") continue;
      try {
        const auto cfg = fidsim::load_config(entry.path().string());
        std::printf("%-18s %-16s %s\n", cfg.name.c_str(),
                    fidsim::to_string(cfg.mode).c_str(),
                    entry.path().string().c_str());
        found = true;
      } catch (const std::exception&) {
        // skip non-scenario json files
      }
    }
    if (found) return 0;
  }
  std::fprintf(stderr, "no scenario configs found\n");
  return 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective-emission interferometer simulator"};
  std::string config_arg;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool check_anchors = false;
  bool do_list = false;
  std::vector<std::string> overrides;

  app.add_option("config", config_arg, "Scenario config path or builtin name");
  app.add_option("--seed", seed, "Override the config seed")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--out", out_dir, "Override the output directory");
  app.add_option("--set", overrides,
                 "Override a config entry, e.g. --set scan.n_points=24");
  app.add_flag("--check-anchors", check_anchors,
               "Exit with status 3 if any hard anchor check fails");
  app.add_flag("--list-scenarios", do_list, "List builtin scenario configs");

  CLI11_PARSE(app, argc, argv);

  if (do_list) return list_scenarios(argv[0]);
  if (config_arg.empty()) {
    std::fprintf(stderr, "error: no config given (see --help)\n");
    return 1;
  }

  fidsim::ScenarioConfig config;
  try {
    const fs::path path = resolve_config(config_arg, argv[0]);
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    for (const auto& kv : overrides)
      text = fidsim::apply_config_override(text, kv);
    config = fidsim::config_from_json_text(text);
    if (seed_given) config.seed = seed;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (config.out_dir.empty()) config.out_dir = "results/" + config.name;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  }

  fidsim::ScenarioResult result;
  try {
    result = fidsim::run(config);
    fidsim::write_result(result, config.out_dir);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }

  std::printf("scenario %s (kernel %s, seed %llu)\n", result.scenario.c_str(),
              fidsim::kernels::active_kernel_name().c_str(),
              static_cast<unsigned long long>(config.seed));
  std::printf("  visibility      %.4f +- %.4f\n", result.fit.visibility,
              result.fit.visibility_stderr);
  std::printf("  net visibility  %.4f +- %.4f\n", result.net_vis,
              result.net_vis_stderr);
  std::size_t hard = 0, passed = 0;
  for (const auto& a : result.anchors) {
    if (!a.hard) continue;
    ++hard;
    if (a.pass) ++passed;
    std::printf("  anchor %-36s %s (%.6g in [%.6g, %.6g])\n", a.name.c_str(),
                a.pass ? "PASS" : "FAIL", a.measured, a.target_lo,
                a.target_hi);
  }
  std::printf("  results in %s\n", config.out_dir.c_str());

  if (check_anchors && passed != hard) return 3;
  return 0;
}
