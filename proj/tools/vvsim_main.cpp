#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vvsim/commands.hpp"
#include "vvsim/scenario.hpp"

namespace {

int env_workers() {
  const char* env = std::getenv("VVSIM_WORKERS");
  if (!env) return 0;
  try {
    return std::stoi(env);
  } catch (...) {
    return 0;
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vvsim: voltage control simulation on radial feeders"};
  app.require_subcommand(1);

  std::string validate_file;
  auto* validate =
      app.add_subcommand("validate", "check a scenario and print its operating numbers");
  validate->add_option("file", validate_file, "scenario JSON")->required();

  std::string run_file, manifest_file, run_out = "out";
  std::vector<std::string> run_overrides;
  int run_workers = env_workers();
  auto* run = app.add_subcommand("run", "run an ensemble, write CSV + sidecar + manifest");
  run->add_option("file", run_file, "scenario JSON");
  run->add_option("--override", run_overrides,
                  "dotted.path=value applied before validation (repeatable)");
  run->add_option("--out", run_out, "output directory (default: out)");
  run->add_option("--manifest", manifest_file, "replay a recorded manifest");
  run->add_option("--workers", run_workers,
                  "parallel realizations (default: $VVSIM_WORKERS or hardware)");

  std::string sweep_file, sweep_param, sweep_values, sweep_out = "out";
  std::vector<std::string> sweep_overrides;
  int sweep_workers = env_workers();
  auto* sweep = app.add_subcommand("sweep", "run a one-parameter grid and summarize");
  sweep->add_option("file", sweep_file, "scenario JSON")->required();
  sweep->add_option("--param", sweep_param, "dotted parameter path")->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();
  sweep->add_option("--override", sweep_overrides, "base overrides (repeatable)");
  sweep->add_option("--out", sweep_out, "output directory (default: out)");
  sweep->add_option("--workers", sweep_workers, "parallel realizations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? vvsim::kExitOk : vvsim::kExitRuntime;
  }

  try {
    if (validate->parsed())
      return vvsim::cmd_validate(validate_file, std::cout, std::cerr);
    if (run->parsed()) {
      if (!manifest_file.empty())
        return vvsim::cmd_run_manifest(
            manifest_file,
            run->count("--out") ? std::filesystem::path(run_out)
                                : std::filesystem::path(),
            run_workers, std::cout, std::cerr);
      if (run_file.empty()) {
        std::cerr << "run: give a scenario file or --manifest\n";
        return vvsim::kExitRuntime;
      }
      return vvsim::cmd_run(run_file, run_overrides, run_out, run_workers,
                            std::cout, std::cerr);
    }
    return vvsim::cmd_sweep(sweep_file, sweep_param, split_csv(sweep_values),
                            sweep_overrides, sweep_out, sweep_workers,
                            std::cout, std::cerr);
  } catch (const vvsim::ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return vvsim::kExitInvalidScenario;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vvsim::kExitRuntime;
  }
}
