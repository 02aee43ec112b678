#include "vvsim/commands.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace vvsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sha1_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("sha1: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << bytes;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double final_quartile_mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const std::size_t q0 = xs.size() - xs.size() / 4;
  double acc = 0.0;
  for (std::size_t k = q0; k < xs.size(); ++k) acc += xs[k];
  return xs.size() > q0 ? acc / static_cast<double>(xs.size() - q0) : xs.back();
}

json bounds_json(const Scenario& sc) {
  return json{{"sync", sc.sync_bound},
              {"dynamic", sc.dynamic_bound},
              {"classical", sc.classical_bound},
              {"classical_K", sc.schedule.K}};
}

// Shared by run and sweep: execute the ensemble and write csv + sidecar.
struct PointOutput {
  EnsembleResult result;
  std::vector<std::string> files;
  double wall_clock_s = 0.0;
};

PointOutput run_point(const Scenario& sc, const std::string& scenario_hash,
                      const fs::path& out_dir, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  PointOutput po;
  po.result = run_ensemble(sc, workers);
  po.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  fs::create_directories(out_dir);
  const fs::path csv = out_dir / (sc.name + ".csv");
  const fs::path side = out_dir / (sc.name + ".sidecar.json");
  write_file(csv, ensemble_csv(po.result));
  write_file(side, sidecar_json(sc, po.result, scenario_hash).dump(2) + "\n");
  po.files = {csv.string(), side.string()};
  return po;
}

}  // namespace

std::string git_blob_sha1(const fs::path& path) {
  const std::string body = read_file(path);
  std::string blob = "blob " + std::to_string(body.size());
  blob.push_back('\0');
  blob += body;
  return sha1_hex(blob);
}

std::string ensemble_csv(const EnsembleResult& r) {
  std::string out =
      "step, mismatch_l2, objective, tracking_err_weighted, oracle_objective, "
      "bound, cum_updates, mismatch_std, tracking_std\n";
  for (std::int64_t k = 0; k < r.horizon; ++k) {
    const auto i = static_cast<std::size_t>(k);
    out += std::to_string(k);
    out += ", " + fmt(r.mean_mismatch[i]);
    out += ", " + fmt(r.mean_objective[i]);
    out += ", " + fmt(r.mean_tracking[i]);
    out += ", " + fmt(r.mean_oracle_objective[i]);
    out += ", " + fmt(r.bound[i]);
    out += ", " + fmt(r.mean_cum_updates[i]);
    out += ", " + fmt(r.std_mismatch[i]);
    out += ", " + fmt(r.std_tracking[i]);
    out += "\n";
  }
  return out;
}

json sidecar_json(const Scenario& sc, const EnsembleResult& r,
                  const std::string& scenario_hash) {
  const BoundReport rep = compare_bound(r);
  return json{{"scenario", sc.name},
              {"scenario_sha1", scenario_hash},
              {"seeds", r.seeds},
              {"eig_min", r.eig_min},
              {"eig_max", r.eig_max},
              {"step_size_bounds", bounds_json(sc)},
              {"epsilon", r.epsilon},
              {"epsilon_spec", sc.controller.epsilon_spec},
              {"rho", r.rho},
              {"theta", r.theta},
              {"b2", json{{"max", r.b2_max}, {"mean", r.b2_mean}}},
              {"initial_tracking_mean", r.initial_tracking_mean},
              {"steady_state",
               json{{"empirical_tracking", rep.steady_state_empirical},
                    {"bound", rep.steady_state_bound_value},
                    {"ratio", rep.ratio},
                    {"mismatch", final_quartile_mean(r.mean_mismatch)}}},
              {"horizon", r.horizon},
              {"realizations", static_cast<int>(r.seeds.size())}};
}

json RunManifest::to_json() const {
  return json{{"scenario_path", scenario_path.string()},
              {"overrides", overrides},
              {"out_dir", out_dir.string()},
              {"scenario_sha1", scenario_sha1},
              {"resolved", resolved},
              {"output_files", output_files},
              {"seeds", seeds},
              {"wall_clock_s", wall_clock_s}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.scenario_path = j.at("scenario_path").get<std::string>();
  m.overrides = j.at("overrides").get<std::vector<std::string>>();
  m.out_dir = j.at("out_dir").get<std::string>();
  m.scenario_sha1 = j.at("scenario_sha1").get<std::string>();
  m.resolved = j.value("resolved", json::object());
  if (j.contains("output_files"))
    m.output_files = j["output_files"].get<std::vector<std::string>>();
  if (j.contains("seeds")) m.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  m.wall_clock_s = j.value("wall_clock_s", 0.0);
  return m;
}

int cmd_validate(const fs::path& scenario, std::ostream& out,
                 std::ostream& err) {
  const Scenario sc = load_scenario(scenario);
  out << "scenario '" << sc.name << "': valid\n";
  out << "  buses: " << sc.net->n() + 1 << " (root + " << sc.net->n()
      << " controllable)\n";
  out << "  eig_min = " << fmt(sc.mat.eig_min)
      << ", eig_max = " << fmt(sc.mat.eig_max) << "\n";
  out << "  step bounds: sync 2/eig_max = " << fmt(sc.sync_bound)
      << ", dynamic 2/(eig_min+eig_max) = " << fmt(sc.dynamic_bound)
      << ", classical async (K=" << sc.schedule.K << ") = "
      << fmt(sc.classical_bound) << "\n";
  out << "  epsilon = " << fmt(sc.controller.epsilon) << " ("
      << sc.controller.epsilon_spec << ")\n";
  for (const auto& w : scenario_warnings(sc)) err << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_run(const fs::path& scenario, const std::vector<std::string>& overrides,
            const fs::path& out_dir, int workers, std::ostream& out,
            std::ostream& err) {
  const Scenario sc = load_scenario(scenario, overrides);
  for (const auto& w : scenario_warnings(sc)) err << "warning: " << w << "\n";

  const std::string hash = git_blob_sha1(scenario);
  const PointOutput po = run_point(sc, hash, out_dir, workers);

  RunManifest m;
  m.scenario_path = fs::absolute(scenario);
  m.overrides = overrides;
  m.out_dir = out_dir;
  m.scenario_sha1 = hash;
  m.resolved = json{{"name", sc.name},
                    {"epsilon", sc.controller.epsilon},
                    {"epsilon_spec", sc.controller.epsilon_spec},
                    {"eig_min", sc.mat.eig_min},
                    {"eig_max", sc.mat.eig_max},
                    {"step_size_bounds", bounds_json(sc)},
                    {"horizon", sc.horizon},
                    {"realizations", sc.realizations},
                    {"master_seed", sc.master_seed},
                    {"physics", sc.sweep_physics ? "sweep" : "linear"},
                    {"mode", sc.strict ? "strict" : "permissive"}};
  m.output_files = po.files;
  m.seeds = po.result.seeds;
  m.wall_clock_s = po.wall_clock_s;

  write_file(out_dir / (sc.name + ".manifest.json"), m.to_json().dump(2) + "\n");
  out << m.to_json().dump(2) << "\n";
  return kExitOk;
}

int cmd_run_manifest(const fs::path& manifest_path, const fs::path& out_dir,
                     int workers, std::ostream& out, std::ostream& err) {
  json j;
  try {
    j = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw ScenarioError("manifest " + manifest_path.string() + ": " + e.what());
  }
  const RunManifest m = RunManifest::from_json(j);
  const std::string hash = git_blob_sha1(m.scenario_path);
  if (hash != m.scenario_sha1)
    throw ScenarioError("manifest replay: scenario " + m.scenario_path.string() +
                        " hash " + hash + " does not match recorded " +
                        m.scenario_sha1);
  return cmd_run(m.scenario_path, m.overrides,
                 out_dir.empty() ? m.out_dir : out_dir, workers, out, err);
}

int cmd_sweep(const fs::path& scenario, const std::string& param,
              const std::vector<std::string>& values,
              const std::vector<std::string>& base_overrides,
              const fs::path& out_dir, int workers, std::ostream& out,
              std::ostream& err) {
  if (values.empty()) throw ScenarioError("sweep: no values given");
  std::string summary =
      "param_value, steady_state_mismatch, steady_state_tracking, bound, ratio\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto overrides = base_overrides;
    overrides.push_back(param + "=" + values[i]);
    const fs::path point_dir = out_dir / ("point_" + std::to_string(i));
    try {
      const Scenario sc = load_scenario(scenario, overrides);
      const PointOutput po =
          run_point(sc, git_blob_sha1(scenario), point_dir, workers);
      const BoundReport rep = compare_bound(po.result);
      summary += values[i] + ", " +
                 fmt(final_quartile_mean(po.result.mean_mismatch)) + ", " +
                 fmt(rep.steady_state_empirical) + ", " +
                 fmt(rep.steady_state_bound_value) + ", " + fmt(rep.ratio) +
                 "\n";
      out << param << "=" << values[i]
          << ": steady tracking " << fmt(rep.steady_state_empirical)
          << ", bound " << fmt(rep.steady_state_bound_value) << "\n";
    } catch (const std::exception& e) {
      ++failures;
      err << "sweep point " << param << "=" << values[i] << " failed: "
          << e.what() << "\n";
      const double nan = std::numeric_limits<double>::quiet_NaN();
      summary += values[i] + ", " + fmt(nan) + ", " + fmt(nan) + ", " +
                 fmt(nan) + ", " + fmt(nan) + "\n";
    }
  }
  fs::create_directories(out_dir);
  write_file(out_dir / "sweep_summary.csv", summary);
  out << "summary: " << (out_dir / "sweep_summary.csv").string() << "\n";
  return failures == values.size() ? kExitRuntime : kExitOk;
}

}  // namespace vvsim
