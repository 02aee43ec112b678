#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <json.hpp>
#include <string>
#include <vector>

#include "vvsim/control.hpp"
#include "vvsim/dynamics.hpp"
#include "vvsim/network.hpp"
#include "vvsim/scheduler.hpp"

namespace vvsim {

// Invalid scenario input (schema or semantic); carries the full diagnostic
// list in what().
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Diagnostic {
  std::string pointer;  // JSON-pointer to the offending value
  std::string message;
};

struct ResolvedController {
  double epsilon = 0.0;
  std::string epsilon_spec;  // "auto_sync", "auto_dynamic", or "explicit"
  double safety = 0.5;
  Scaling scaling = Scaling::newton_diag;
  Eigen::VectorXd mu;
  Eigen::VectorXd q0;  // initial injections, projected onto the step-0 box
};

struct ScheduleSpec {
  enum class Mode { sync, duty_cycle, adversarial, file, none };
  Mode mode = Mode::sync;
  int K = 1;
  double eta = 1.0;
  std::uint64_t seed = 0;
  std::filesystem::path path;

  bool has_delay_bound() const {
    return mode == Mode::duty_cycle || mode == Mode::adversarial ||
           mode == Mode::file;
  }
};

// A fully validated and resolved run configuration.
struct Scenario {
  std::string name;
  nlohmann::json raw;  // document after overrides, as validated

  std::shared_ptr<const RadialNetwork> net;
  NetworkMatrices mat;
  ResolvedController controller;
  Ar1Params dynamics;   // cbar already derived from the mean profile
  Eigen::VectorXd mean_profile;
  LimitsProfile limits;
  ScheduleSpec schedule;

  std::int64_t horizon = 0;
  int realizations = 1;
  std::uint64_t master_seed = 0;
  bool sweep_physics = false;
  bool strict = true;

  // Reporting values resolved at load time.
  double sync_bound = 0.0;       // 2/eig_max
  double dynamic_bound = 0.0;    // 2/(eig_min+eig_max)
  double classical_bound = 0.0;  // using schedule.K (K=1 for sync)

  // Real-power injections reproducing vbar as the zero-q linear profile;
  // only built for sweep physics (needs r > 0 everywhere).
  Eigen::MatrixXd p_from_vbar;

  // Build the participation pattern for one episode.
  Schedule materialize_schedule(std::uint64_t episode_seed) const;
};

// Structural + semantic validation; returns every diagnostic found (empty
// means the document is loadable). Does not throw on invalid content.
std::vector<Diagnostic> validate_scenario_json(const nlohmann::json& doc);

// Apply one "dotted.path=value" override to a raw document. Values parse as
// JSON when possible, otherwise as strings. Throws ScenarioError on a
// malformed spec.
void apply_override(nlohmann::json& doc, const std::string& spec);

// Load, apply overrides, validate, and resolve. Throws ScenarioError with
// all diagnostics on failure.
Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});
Scenario resolve_scenario(nlohmann::json doc);

// Warnings that do not invalidate a scenario (e.g. an unstable step size in
// permissive mode).
std::vector<std::string> scenario_warnings(const Scenario& sc);

}  // namespace vvsim
