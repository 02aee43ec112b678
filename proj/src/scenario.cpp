#include "vvsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vvsim/rng.hpp"

namespace vvsim {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& ptr,
                const std::set<std::string>& allowed,
                const std::vector<std::string>& required,
                std::vector<Diagnostic>& out) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      out.push_back({ptr + "/" + it.key(), "unknown key"});
  for (const auto& k : required)
    if (!obj.contains(k))
      out.push_back({ptr, "missing required key '" + k + "'"});
}

bool expect_object(const json& v, const std::string& ptr,
                   std::vector<Diagnostic>& out) {
  if (v.is_object()) return true;
  out.push_back({ptr, "expected an object"});
  return false;
}

bool finite_number(const json& v) {
  return v.is_number() && std::isfinite(v.get<double>());
}

bool is_u64(const json& v) {
  return v.is_number_unsigned() ||
         (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

bool check_number(const json& obj, const std::string& ptr, const char* key,
                  std::vector<Diagnostic>& out) {
  if (!obj.contains(key)) return false;
  if (finite_number(obj[key])) return true;
  out.push_back({ptr + "/" + key, "expected a finite number"});
  return false;
}

// number -> broadcast, array -> per-bus values
bool check_per_bus(const json& v, const std::string& ptr, int n,
                   std::vector<Diagnostic>& out) {
  if (finite_number(v)) return true;
  if (!v.is_array()) {
    out.push_back({ptr, "expected a number or an array of numbers"});
    return false;
  }
  if (n > 0 && static_cast<int>(v.size()) != n) {
    out.push_back({ptr, "expected " + std::to_string(n) + " entries, got " +
                            std::to_string(v.size())});
    return false;
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!finite_number(v[i])) {
      out.push_back({ptr + "/" + std::to_string(i), "expected a finite number"});
      return false;
    }
  return true;
}

Eigen::VectorXd per_bus_vector(const json& v, int n) {
  if (v.is_number()) return Eigen::VectorXd::Constant(n, v.get<double>());
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = v[static_cast<std::size_t>(i)].get<double>();
  return out;
}

int topology_bus_count(const json& doc) {
  if (doc.contains("topology") && doc["topology"].is_object() &&
      doc["topology"].contains("buses") &&
      doc["topology"]["buses"].is_number_integer())
    return doc["topology"]["buses"].get<int>() - 1;
  return -1;  // unknown; per-bus array sizes can't be checked
}

void validate_topology(const json& t, std::vector<Diagnostic>& out) {
  if (!expect_object(t, "/topology", out)) return;
  check_keys(t, "/topology", {"buses", "lines", "v0"}, {"buses", "lines"}, out);
  if (t.contains("buses") &&
      (!t["buses"].is_number_integer() || t["buses"].get<std::int64_t>() < 2))
    out.push_back({"/topology/buses", "expected an integer >= 2"});
  if (t.contains("v0") && (!finite_number(t["v0"]) || !(t["v0"].get<double>() > 0)))
    out.push_back({"/topology/v0", "expected a positive number"});
  if (!t.contains("lines")) return;
  if (!t["lines"].is_array()) {
    out.push_back({"/topology/lines", "expected an array"});
    return;
  }
  for (std::size_t i = 0; i < t["lines"].size(); ++i) {
    const std::string ptr = "/topology/lines/" + std::to_string(i);
    const json& l = t["lines"][i];
    if (!expect_object(l, ptr, out)) continue;
    check_keys(l, ptr, {"from", "to", "r", "x"}, {"from", "to", "r", "x"}, out);
    for (const char* k : {"from", "to"})
      if (l.contains(k) && !l[k].is_number_integer())
        out.push_back({ptr + "/" + k, "expected an integer bus index"});
    for (const char* k : {"r", "x"}) check_number(l, ptr, k, out);
  }
}

void validate_controller(const json& c, int n, std::vector<Diagnostic>& out) {
  if (!expect_object(c, "/controller", out)) return;
  check_keys(c, "/controller", {"epsilon", "safety", "scaling", "mu", "q0"},
             {"epsilon"}, out);
  if (c.contains("epsilon")) {
    const json& e = c["epsilon"];
    if (e.is_string()) {
      const auto s = e.get<std::string>();
      if (s != "auto_sync" && s != "auto_dynamic")
        out.push_back({"/controller/epsilon",
                       "expected a positive number, \"auto_sync\" or \"auto_dynamic\""});
    } else if (!finite_number(e) || !(e.get<double>() > 0)) {
      out.push_back({"/controller/epsilon",
                     "expected a positive number, \"auto_sync\" or \"auto_dynamic\""});
    }
  }
  if (c.contains("safety") &&
      (!finite_number(c["safety"]) || !(c["safety"].get<double>() > 0) ||
       c["safety"].get<double>() > 1))
    out.push_back({"/controller/safety", "expected a number in (0, 1]"});
  if (c.contains("scaling")) {
    const json& s = c["scaling"];
    if (!s.is_string() || (s != "newton_diag" && s != "identity"))
      out.push_back({"/controller/scaling",
                     "expected \"newton_diag\" or \"identity\""});
  }
  if (c.contains("mu")) {
    const json& m = c["mu"];
    if (m.is_string()) {
      if (m != "flat")
        out.push_back({"/controller/mu", "expected \"flat\" or an array"});
    } else {
      check_per_bus(m, "/controller/mu", n, out);
      if (m.is_number())
        out.push_back({"/controller/mu", "expected \"flat\" or an array"});
    }
  }
  if (c.contains("q0")) check_per_bus(c["q0"], "/controller/q0", n, out);
}

void validate_limits(const json& l, int n, std::vector<Diagnostic>& out) {
  if (!expect_object(l, "/dynamics/limits", out)) return;
  check_keys(l, "/dynamics/limits", {"mode", "lower", "upper", "scale"},
             {"lower", "upper"}, out);
  bool scaled = false;
  if (l.contains("mode")) {
    const json& m = l["mode"];
    if (!m.is_string() || (m != "static" && m != "scaled")) {
      out.push_back({"/dynamics/limits/mode", "expected \"static\" or \"scaled\""});
    } else {
      scaled = m == "scaled";
    }
  }
  for (const char* k : {"lower", "upper"})
    if (l.contains(k)) check_per_bus(l[k], std::string("/dynamics/limits/") + k, n, out);
  if (scaled) {
    if (!l.contains("scale")) {
      out.push_back({"/dynamics/limits", "scaled mode requires a 'scale' series"});
    } else if (!l["scale"].is_array() || l["scale"].empty()) {
      out.push_back({"/dynamics/limits/scale", "expected a non-empty array"});
    } else {
      for (std::size_t i = 0; i < l["scale"].size(); ++i) {
        const json& s = l["scale"][i];
        if (!finite_number(s) || !(s.get<double>() > 0) || s.get<double>() > 1)
          out.push_back({"/dynamics/limits/scale/" + std::to_string(i),
                         "expected a number in (0, 1]"});
      }
    }
  } else if (l.contains("scale")) {
    out.push_back({"/dynamics/limits/scale", "only meaningful in scaled mode"});
  }
}

void validate_dynamics(const json& d, int n, std::vector<Diagnostic>& out) {
  if (!expect_object(d, "/dynamics", out)) return;
  check_keys(d, "/dynamics",
             {"alpha", "A", "sigma2", "stationary_variance", "mean_profile",
              "seed", "limits"},
             {"mean_profile", "limits"}, out);
  if (d.contains("alpha") && d.contains("A"))
    out.push_back({"/dynamics", "give either scalar 'alpha' or matrix 'A', not both"});
  if (!d.contains("alpha") && !d.contains("A"))
    out.push_back({"/dynamics", "missing transition: give 'alpha' or 'A'"});
  if (d.contains("alpha") &&
      (!finite_number(d["alpha"]) || !(std::abs(d["alpha"].get<double>()) < 1)))
    out.push_back({"/dynamics/alpha", "expected |alpha| < 1"});
  if (d.contains("A")) {
    const json& a = d["A"];
    if (!a.is_array() || (n > 0 && static_cast<int>(a.size()) != n)) {
      out.push_back({"/dynamics/A", "expected an n x n array of rows"});
    } else {
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_array() || a[i].size() != a.size())
          out.push_back({"/dynamics/A/" + std::to_string(i), "expected a row of length n"});
    }
  }
  for (const char* k : {"sigma2", "stationary_variance"})
    if (d.contains(k) &&
        (!finite_number(d[k]) || d[k].get<double>() < 0))
      out.push_back({std::string("/dynamics/") + k, "expected a number >= 0"});
  if (d.contains("mean_profile")) {
    const json& m = d["mean_profile"];
    if (m.is_string()) {
      if (m != "paper_ramp")
        out.push_back({"/dynamics/mean_profile", "expected \"paper_ramp\" or an array"});
    } else if (!m.is_array()) {
      out.push_back({"/dynamics/mean_profile", "expected \"paper_ramp\" or an array"});
    } else {
      check_per_bus(m, "/dynamics/mean_profile", n, out);
    }
  }
  if (d.contains("seed") && !is_u64(d["seed"]))
    out.push_back({"/dynamics/seed", "expected an unsigned integer"});
  if (d.contains("limits")) validate_limits(d["limits"], n, out);
}

void validate_schedule(const json& s, std::vector<Diagnostic>& out) {
  if (!expect_object(s, "/schedule", out)) return;
  const std::string mode =
      s.contains("mode") && s["mode"].is_string() ? s["mode"].get<std::string>() : "";
  static const std::set<std::string> modes{"sync", "duty_cycle", "adversarial",
                                           "file", "none"};
  if (!modes.count(mode)) {
    out.push_back({"/schedule/mode",
                   "expected one of sync, duty_cycle, adversarial, file, none"});
    return;
  }
  std::set<std::string> allowed{"mode"};
  std::vector<std::string> required;
  if (mode == "sync") {
    allowed.insert("K");
  } else if (mode == "duty_cycle") {
    allowed.insert({"K", "eta", "seed"});
    required = {"K", "eta"};
  } else if (mode == "adversarial") {
    allowed.insert("K");
    required = {"K"};
  } else if (mode == "file") {
    allowed.insert({"K", "path"});
    required = {"K", "path"};
  }
  check_keys(s, "/schedule", allowed, required, out);
  if (s.contains("K") &&
      (!s["K"].is_number_integer() || s["K"].get<std::int64_t>() < 1))
    out.push_back({"/schedule/K", "expected an integer >= 1"});
  if (mode == "duty_cycle" && s.contains("K") && s["K"].is_number_integer() &&
      s["K"].get<std::int64_t>() % 2 != 0)
    out.push_back({"/schedule/K", "duty-cycle K must be even"});
  if (s.contains("eta")) {
    const json& e = s["eta"];
    if (!finite_number(e) || !(e.get<double>() > 0) || e.get<double>() > 1)
      out.push_back({"/schedule/eta", "expected a number in (0, 1]"});
  }
  if (s.contains("seed") && !is_u64(s["seed"]))
    out.push_back({"/schedule/seed", "expected an unsigned integer"});
  if (s.contains("path") && !s["path"].is_string())
    out.push_back({"/schedule/path", "expected a file path string"});
}

void validate_base(const json& b, std::vector<Diagnostic>& out) {
  if (!expect_object(b, "/base", out)) return;
  check_keys(b, "/base", {"s_base_va", "v_base_v", "note"}, {}, out);
  for (const char* k : {"s_base_va", "v_base_v"})
    if (b.contains(k) && (!finite_number(b[k]) || !(b[k].get<double>() > 0)))
      out.push_back({std::string("/base/") + k, "expected a positive number"});
  if (b.contains("note") && !b["note"].is_string())
    out.push_back({"/base/note", "expected a string"});
}

}  // namespace

std::vector<Diagnostic> validate_scenario_json(const json& doc) {
  std::vector<Diagnostic> out;
  if (!doc.is_object()) {
    out.push_back({"", "scenario must be a JSON object"});
    return out;
  }
  check_keys(doc, "",
             {"name", "topology", "base", "controller", "dynamics", "schedule",
              "horizon", "realizations", "master_seed", "physics", "mode"},
             {"topology", "controller", "dynamics", "schedule", "horizon",
              "realizations", "master_seed"},
             out);
  if (doc.contains("name") && !doc["name"].is_string())
    out.push_back({"/name", "expected a string"});

  const int n = topology_bus_count(doc);
  if (doc.contains("topology")) validate_topology(doc["topology"], out);
  if (doc.contains("base")) validate_base(doc["base"], out);
  if (doc.contains("controller")) validate_controller(doc["controller"], n, out);
  if (doc.contains("dynamics")) validate_dynamics(doc["dynamics"], n, out);
  if (doc.contains("schedule")) validate_schedule(doc["schedule"], out);

  if (doc.contains("horizon") && (!doc["horizon"].is_number_integer() ||
                                  doc["horizon"].get<std::int64_t>() < 1))
    out.push_back({"/horizon", "expected an integer >= 1"});
  if (doc.contains("realizations") &&
      (!doc["realizations"].is_number_integer() ||
       doc["realizations"].get<std::int64_t>() < 1))
    out.push_back({"/realizations", "expected an integer >= 1"});
  if (doc.contains("master_seed") && !is_u64(doc["master_seed"]))
    out.push_back({"/master_seed", "expected an unsigned integer"});
  if (doc.contains("physics") &&
      (!doc["physics"].is_string() ||
       (doc["physics"] != "linear" && doc["physics"] != "sweep")))
    out.push_back({"/physics", "expected \"linear\" or \"sweep\""});
  if (doc.contains("mode") &&
      (!doc["mode"].is_string() ||
       (doc["mode"] != "strict" && doc["mode"] != "permissive")))
    out.push_back({"/mode", "expected \"strict\" or \"permissive\""});
  return out;
}

void apply_override(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ScenarioError("override '" + spec + "' must look like dotted.path=value");
  const std::string path = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // bare strings are fine (e.g. epsilon=auto_dynamic)
  }

  json* node = &doc;
  std::stringstream keys(path);
  std::string key, next;
  if (!std::getline(keys, key, '.'))
    throw ScenarioError("override '" + spec + "' has an empty path");
  while (std::getline(keys, next, '.')) {
    if (!node->is_object())
      throw ScenarioError("override '" + spec + "': '" + key +
                          "' is not an object");
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    key = next;
  }
  if (!node->is_object())
    throw ScenarioError("override '" + spec + "': path does not lead into an object");
  (*node)[key] = parsed;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string msg = "invalid scenario:";
  for (const auto& d : diags)
    msg += "\n  " + (d.pointer.empty() ? std::string("/") : d.pointer) + ": " +
           d.message;
  return msg;
}

}  // namespace

Scenario resolve_scenario(json doc) {
  auto diags = validate_scenario_json(doc);
  if (!diags.empty()) throw ScenarioError(join_diagnostics(diags));

  Scenario sc;
  sc.raw = doc;
  sc.name = doc.value("name", std::string("scenario"));
  sc.horizon = doc["horizon"].get<std::int64_t>();
  sc.realizations = doc["realizations"].get<int>();
  sc.master_seed = doc["master_seed"].get<std::uint64_t>();
  sc.sweep_physics = doc.value("physics", std::string("linear")) == "sweep";
  sc.strict = doc.value("mode", std::string("strict")) == "strict";

  const auto fail = [&](const std::string& ptr, const std::string& what) {
    throw ScenarioError(join_diagnostics({{ptr, what}}));
  };

  // Topology.
  const json& t = doc["topology"];
  std::vector<Line> lines;
  for (const json& l : t["lines"])
    lines.push_back(Line{l["from"].get<int>(), l["to"].get<int>(),
                         l["r"].get<double>(), l["x"].get<double>()});
  try {
    sc.net = std::make_shared<RadialNetwork>(t["buses"].get<int>(),
                                             std::move(lines),
                                             t.value("v0", 1.0));
  } catch (const std::exception& e) {
    fail("/topology", e.what());
  }
  const int n = sc.net->n();

  // Controller scaffolding (matrices depend on the scaling choice).
  const json& c = doc["controller"];
  sc.controller.safety = c.value("safety", 0.5);
  sc.controller.scaling = c.value("scaling", std::string("newton_diag")) ==
                                  std::string("identity")
                              ? Scaling::identity
                              : Scaling::newton_diag;
  try {
    sc.mat = build_matrices(*sc.net, sc.controller.scaling);
  } catch (const std::exception& e) {
    fail("/topology", e.what());
  }
  sc.sync_bound = sync_step_size_bound(sc.mat);
  sc.dynamic_bound = dynamic_step_size_bound(sc.mat);

  if (c["epsilon"].is_string()) {
    sc.controller.epsilon_spec = c["epsilon"].get<std::string>();
    sc.controller.epsilon =
        sc.controller.safety * (sc.controller.epsilon_spec == "auto_sync"
                                    ? sc.sync_bound
                                    : sc.dynamic_bound);
  } else {
    sc.controller.epsilon_spec = "explicit";
    sc.controller.epsilon = c["epsilon"].get<double>();
  }
  if (c.contains("mu") && c["mu"].is_array())
    sc.controller.mu = per_bus_vector(c["mu"], n);
  else
    sc.controller.mu = Eigen::VectorXd::Ones(n);
  sc.controller.q0 =
      c.contains("q0") ? per_bus_vector(c["q0"], n) : Eigen::VectorXd::Zero(n);

  // Dynamics.
  const json& d = doc["dynamics"];
  if (d.contains("mean_profile") && d["mean_profile"].is_array())
    sc.mean_profile = per_bus_vector(d["mean_profile"], n);
  else
    sc.mean_profile = declining_voltage_profile(n);
  sc.dynamics.seed = d.value("seed", std::uint64_t{0});
  if (d.contains("A")) {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        A(i, j) = d["A"][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                      .get<double>();
    sc.dynamics.A = A;
    sc.dynamics.cbar =
        (Eigen::MatrixXd::Identity(n, n) - A) * sc.mean_profile;
  } else {
    sc.dynamics.alpha = d["alpha"].get<double>();
    sc.dynamics.cbar = (1.0 - sc.dynamics.alpha) * sc.mean_profile;
  }
  if (d.contains("stationary_variance")) {
    // Precedence over sigma2: pins the stationary spread while alpha sweeps.
    if (sc.dynamics.A)
      fail("/dynamics/stationary_variance",
           "only supported with the scalar transition");
    sc.dynamics.sigma2 = d["stationary_variance"].get<double>() *
                         (1.0 - sc.dynamics.alpha * sc.dynamics.alpha);
  } else {
    sc.dynamics.sigma2 = d.value("sigma2", 0.0);
  }
  try {
    sc.dynamics.validate();
  } catch (const std::exception& e) {
    fail("/dynamics", e.what());
  }

  // Limits profile.
  const json& lim = d["limits"];
  sc.limits.mode = lim.value("mode", std::string("static")) == "scaled"
                       ? LimitsProfile::Mode::scaled
                       : LimitsProfile::Mode::fixed;
  sc.limits.base.lower = per_bus_vector(lim["lower"], n);
  sc.limits.base.upper = per_bus_vector(lim["upper"], n);
  if (sc.limits.mode == LimitsProfile::Mode::scaled)
    sc.limits.scale = lim["scale"].get<std::vector<double>>();
  try {
    sc.limits.validate();
  } catch (const std::exception& e) {
    fail("/dynamics/limits", e.what());
  }

  // Schedule.
  const json& s = doc["schedule"];
  const std::string mode = s["mode"].get<std::string>();
  sc.schedule.mode = mode == "sync"           ? ScheduleSpec::Mode::sync
                     : mode == "duty_cycle"   ? ScheduleSpec::Mode::duty_cycle
                     : mode == "adversarial"  ? ScheduleSpec::Mode::adversarial
                     : mode == "file"         ? ScheduleSpec::Mode::file
                                              : ScheduleSpec::Mode::none;
  sc.schedule.K = s.value("K", 1);
  sc.schedule.eta = s.value("eta", 1.0);
  sc.schedule.seed = s.value("seed", std::uint64_t{0});
  if (s.contains("path")) sc.schedule.path = s["path"].get<std::string>();
  sc.classical_bound =
      classical_async_step_size_bound(sc.mat, sc.schedule.K, n);
  try {
    // Materialize once: surfaces generator argument errors and, for file
    // schedules, enforces the declared delay bound.
    const Schedule probe =
        sc.materialize_schedule(rng::derive(sc.master_seed, 0));
    if (sc.schedule.has_delay_bound()) {
      const auto rep = probe.validate_bounded_delay(sc.schedule.K);
      if (!rep.ok) fail("/schedule", "delay bound violated: " + rep.detail);
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& e) {
    fail("/schedule", e.what());
  }

  // Stability gate.
  if (sc.strict && sc.controller.epsilon >= sc.sync_bound)
    fail("/controller/epsilon",
         "step size " + std::to_string(sc.controller.epsilon) +
             " is not below the stability bound 2/eig_max = " +
             std::to_string(sc.sync_bound) +
             " (strict mode; set mode=permissive to record divergence)");

  // Sweep physics needs resistive lines to derive driving injections.
  if (sc.sweep_physics) {
    for (int j = 1; j <= n; ++j)
      if (!(sc.net->line_into(j).r > 0.0))
        fail("/topology/lines",
             "sweep physics needs r > 0 on every line (line into bus " +
                 std::to_string(j) + ")");
    sc.p_from_vbar = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j <= n; ++j) {
      const double w = 1.0 / sc.net->line_into(j).r;
      sc.p_from_vbar(j - 1, j - 1) += w;
      const int p = sc.net->parent(j);
      if (p >= 1) {
        sc.p_from_vbar(p - 1, p - 1) += w;
        sc.p_from_vbar(p - 1, j - 1) -= w;
        sc.p_from_vbar(j - 1, p - 1) -= w;
      }
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ScenarioError("scenario " + path.string() + ": " + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  Scenario sc = resolve_scenario(std::move(doc));
  if (!sc.raw.contains("name")) sc.name = path.stem().string();
  return sc;
}

Schedule Scenario::materialize_schedule(std::uint64_t episode_seed) const {
  const int n = net->n();
  switch (schedule.mode) {
    case ScheduleSpec::Mode::sync:
      return all_active_schedule(n, horizon);
    case ScheduleSpec::Mode::none:
      return no_control_schedule(n, horizon);
    case ScheduleSpec::Mode::adversarial:
      return adversarial_schedule(n, horizon, schedule.K);
    case ScheduleSpec::Mode::duty_cycle:
      return duty_cycle_schedule(n, horizon, schedule.K, schedule.eta,
                                 rng::derive(episode_seed, schedule.seed));
    case ScheduleSpec::Mode::file:
      return schedule_from_file(schedule.path, n, horizon);
  }
  throw std::logic_error("unreachable schedule mode");
}

std::vector<std::string> scenario_warnings(const Scenario& sc) {
  std::vector<std::string> w;
  if (sc.controller.epsilon >= sc.sync_bound)
    w.push_back("step size " + std::to_string(sc.controller.epsilon) +
                " >= 2/eig_max = " + std::to_string(sc.sync_bound) +
                "; updates will not contract (permissive mode records this)");
  if (sc.schedule.mode == ScheduleSpec::Mode::none)
    w.push_back("schedule mode 'none': uncontrolled baseline, injections stay at q0");
  if (sc.raw["dynamics"].contains("stationary_variance") &&
      sc.raw["dynamics"].contains("sigma2"))
    w.push_back("dynamics gives both sigma2 and stationary_variance; "
                "stationary_variance takes precedence");
  return w;
}

}  // namespace vvsim
