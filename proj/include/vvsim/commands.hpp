#pragma once

#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "vvsim/harness.hpp"
#include "vvsim/scenario.hpp"

namespace vvsim {

// Exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidScenario = 1;
inline constexpr int kExitRuntime = 2;

// Git-style blob hash ("blob <len><NUL><bytes>") of a file's contents.
std::string git_blob_sha1(const std::filesystem::path& path);

// Exact CSV serialization of an ensemble (doubles as %.17g); the run and
// determinism contracts compare these bytes directly.
std::string ensemble_csv(const EnsembleResult& r);

nlohmann::json sidecar_json(const Scenario& sc, const EnsembleResult& r,
                            const std::string& scenario_hash);

struct RunManifest {
  std::filesystem::path scenario_path;
  std::vector<std::string> overrides;
  std::filesystem::path out_dir;
  std::string scenario_sha1;
  nlohmann::json resolved;  // resolved parameters incl. epsilon and bounds
  std::vector<std::string> output_files;
  std::vector<std::uint64_t> seeds;
  double wall_clock_s = 0.0;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

int cmd_validate(const std::filesystem::path& scenario, std::ostream& out,
                 std::ostream& err);

int cmd_run(const std::filesystem::path& scenario,
            const std::vector<std::string>& overrides,
            const std::filesystem::path& out_dir, int workers,
            std::ostream& out, std::ostream& err);

// Re-run from a saved manifest; verifies the scenario hash first. An empty
// out_dir replays into the directory the manifest recorded.
int cmd_run_manifest(const std::filesystem::path& manifest_path,
                     const std::filesystem::path& out_dir, int workers,
                     std::ostream& out, std::ostream& err);

int cmd_sweep(const std::filesystem::path& scenario, const std::string& param,
              const std::vector<std::string>& values,
              const std::vector<std::string>& base_overrides,
              const std::filesystem::path& out_dir, int workers,
              std::ostream& out, std::ostream& err);

}  // namespace vvsim
