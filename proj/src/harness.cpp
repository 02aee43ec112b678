#include "vvsim/harness.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "vvsim/rng.hpp"

namespace vvsim {

TrackingRecord run_episode(const Scenario& sc, std::uint64_t episode_seed) {
  const int n = sc.net->n();
  const std::int64_t H = sc.horizon;

  TrackingRecord rec;
  rec.seed = episode_seed;
  rec.mismatch.reserve(H);
  rec.objective.reserve(H);
  rec.tracking.reserve(H);
  rec.oracle_objective.reserve(H);
  rec.cum_updates.reserve(H);

  Ar1Params dyn = sc.dynamics;
  dyn.seed = rng::derive(episode_seed, sc.dynamics.seed);

  const Schedule sched = sc.materialize_schedule(episode_seed);
  const Eigen::VectorXd& mu = sc.controller.mu;
  const ControllerConfig cfg{sc.controller.epsilon, mu};

  VarLimits limits = sc.limits.at(0);
  Eigen::VectorXd q0 = sc.controller.q0;
  if (q0.size() == 0) q0 = Eigen::VectorXd::Zero(n);
  if (q0.size() != n)
    throw std::invalid_argument("run_episode: q0 length does not match bus count");
  Eigen::VectorXd q = limits.clamp(q0);
  Eigen::VectorXd vbar = stationary_init(dyn);

  BoxQpSolver solver(sc.mat.X, sc.mat.D, sc.mat.eig_min, sc.mat.eig_max);
  Eigen::VectorXd qstar_prev;
  std::int64_t updates = 0;
  std::vector<std::uint8_t> active(static_cast<std::size_t>(n));

  for (std::int64_t k = 0; k < H; ++k) {
    try {
      if (k > 0) {
        vbar = ar1_step(vbar, dyn, static_cast<std::uint64_t>(k));
        if (sc.limits.varies()) limits = sc.limits.at(k);
      }

      Eigen::VectorXd v;
      if (sc.sweep_physics) {
        const Eigen::VectorXd p =
            sc.p_from_vbar *
            (vbar - Eigen::VectorXd::Constant(n, sc.net->v0()));
        v = sweep_voltage(*sc.net, p, q).cwiseSqrt();
      } else {
        v = sc.mat.X * q + vbar;
      }

      const Eigen::VectorXd qstar = solver.solve(vbar, mu, limits);

      const Eigen::VectorXd dv = v - mu;
      const Eigen::VectorXd star_dv = sc.mat.X * qstar + vbar - mu;
      const double obj = 0.5 * dv.dot(sc.mat.B * dv);
      const double obj_star = 0.5 * star_dv.dot(sc.mat.B * star_dv);
      // The model objective can never undercut its minimizer; anything else
      // means the setpoint solver returned garbage. Only meaningful while q
      // is feasible — a freshly tightened box leaves it outside until the
      // next update.
      const double obj_model =
          sc.sweep_physics
              ? [&] {
                  const Eigen::VectorXd lin_dv = sc.mat.X * q + vbar - mu;
                  return 0.5 * lin_dv.dot(sc.mat.B * lin_dv);
                }()
              : obj;
      if (limits.contains(q, 1e-9) && obj_model < obj_star - 1e-9)
        throw std::runtime_error(
            "objective dominance violated (f(q)=" + std::to_string(obj_model) +
            " < f(q*)=" + std::to_string(obj_star) + ")");

      const Eigen::VectorXd dq = q - qstar;
      rec.mismatch.push_back(dv.norm());
      rec.objective.push_back(obj);
      rec.tracking.push_back(dq.cwiseQuotient(sc.mat.D).dot(dq));
      rec.oracle_objective.push_back(obj_star);
      rec.cum_updates.push_back(updates);

      if (k > 0) {
        const Eigen::VectorXd d = qstar - qstar_prev;
        const double w = d.cwiseQuotient(sc.mat.D).dot(d);
        rec.drift.max_sq = std::max(rec.drift.max_sq, w);
        rec.drift.mean_sq += w;
        ++rec.drift.samples;
      }
      qstar_prev = qstar;

      const int acts = sched.active_count(k);
      if (acts > 0) {
        for (int j = 0; j < n; ++j)
          active[static_cast<std::size_t>(j)] = sched.is_active(k, j + 1);
        q = gp_step(q, v, cfg, sc.mat.D, limits, &active);
        updates += acts;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("episode seed " + std::to_string(episode_seed) +
                               ", step " + std::to_string(k) + ": " + e.what());
    }
  }
  if (rec.drift.samples > 0)
    rec.drift.mean_sq /= static_cast<double>(rec.drift.samples);
  rec.final_q = q;
  return rec;
}

EnsembleResult run_ensemble(const Scenario& sc, int workers) {
  return run_ensemble(sc, sc.realizations, sc.master_seed, workers);
}

EnsembleResult run_ensemble(const Scenario& sc, int realizations,
                            std::uint64_t master_seed, int workers) {
  if (realizations < 1)
    throw std::invalid_argument("ensemble: need at least one realization");
  const std::int64_t H = sc.horizon;
  const int R = realizations;

  std::vector<std::uint64_t> seeds(R);
  for (int r = 0; r < R; ++r)
    seeds[r] = rng::derive(master_seed, static_cast<std::uint64_t>(r));

  std::vector<TrackingRecord> records(R);
  std::vector<std::string> errors(R);

  int nw = workers;
  if (nw <= 0) nw = static_cast<int>(std::thread::hardware_concurrency());
  nw = std::max(1, std::min(nw, R));

  if (nw == 1) {
    for (int r = 0; r < R; ++r) {
      try {
        records[r] = run_episode(sc, seeds[r]);
      } catch (const std::exception& e) {
        errors[r] = e.what();
        break;
      }
    }
  } else {
    std::atomic<int> next{0};
    auto work = [&] {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= R) return;
        try {
          records[r] = run_episode(sc, seeds[r]);
        } catch (const std::exception& e) {
          errors[r] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int t = 0; t < nw; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (int r = 0; r < R; ++r)
    if (!errors[r].empty())
      throw std::runtime_error("ensemble aborted: " + errors[r]);

  EnsembleResult res;
  res.horizon = H;
  res.seeds = std::move(seeds);
  res.epsilon = sc.controller.epsilon;
  res.eig_min = sc.mat.eig_min;
  res.eig_max = sc.mat.eig_max;

  const auto aggregate = [R](auto getter, std::vector<double>& mean,
                             std::vector<double>* stdev, std::int64_t H) {
    mean.assign(H, 0.0);
    if (stdev) stdev->assign(H, 0.0);
    for (std::int64_t k = 0; k < H; ++k) {
      double s = 0.0;
      for (int r = 0; r < R; ++r) s += getter(r, k);
      const double m = s / R;
      mean[static_cast<std::size_t>(k)] = m;
      if (stdev) {
        double v = 0.0;
        for (int r = 0; r < R; ++r) {
          const double d = getter(r, k) - m;
          v += d * d;
        }
        (*stdev)[static_cast<std::size_t>(k)] = std::sqrt(v / R);
      }
    }
  };

  aggregate([&](int r, std::int64_t k) { return records[r].mismatch[k]; },
            res.mean_mismatch, &res.std_mismatch, H);
  aggregate([&](int r, std::int64_t k) { return records[r].objective[k]; },
            res.mean_objective, nullptr, H);
  aggregate([&](int r, std::int64_t k) { return records[r].tracking[k]; },
            res.mean_tracking, &res.std_tracking, H);
  aggregate(
      [&](int r, std::int64_t k) { return records[r].oracle_objective[k]; },
      res.mean_oracle_objective, nullptr, H);
  aggregate(
      [&](int r, std::int64_t k) {
        return static_cast<double>(records[r].cum_updates[k]);
      },
      res.mean_cum_updates, nullptr, H);

  for (int r = 0; r < R; ++r) {
    res.b2_max = std::max(res.b2_max, records[r].drift.max_sq);
    res.b2_mean += records[r].drift.mean_sq;
  }
  res.b2_mean /= R;
  res.initial_tracking_mean = res.mean_tracking.empty() ? 0.0 : res.mean_tracking[0];

  res.bound.assign(H, std::numeric_limits<double>::infinity());
  res.rho = std::numeric_limits<double>::infinity();
  res.theta = std::numeric_limits<double>::infinity();
  const double eps_cap = 2.0 / (res.eig_min + res.eig_max);
  if (res.epsilon <= eps_cap * (1.0 + 1e-12)) {
    BoundParams bp;
    bp.eig_min = res.eig_min;
    bp.eig_max = res.eig_max;
    bp.epsilon = res.epsilon;
    bp.drift_sq = res.b2_max;
    res.rho = contraction_rate(bp);
    res.theta = per_step_gap(bp);
    for (std::int64_t k = 0; k < H; ++k)
      res.bound[static_cast<std::size_t>(k)] =
          tracking_bound(bp, res.initial_tracking_mean, k);
  }
  return res;
}

BoundReport compare_bound(const EnsembleResult& r) {
  BoundReport rep;
  rep.valid_at_every_step = true;
  for (std::int64_t k = 0; k < r.horizon; ++k) {
    const double emp = r.mean_tracking[static_cast<std::size_t>(k)];
    const double b = r.bound[static_cast<std::size_t>(k)];
    if (emp > b && rep.valid_at_every_step) {
      rep.valid_at_every_step = false;
      rep.first_violation = k;
    }
    if (b > 0.0)
      rep.max_step_ratio = std::max(rep.max_step_ratio, emp / b);
  }
  const std::int64_t q0 = r.horizon - r.horizon / 4;
  double acc = 0.0;
  for (std::int64_t k = q0; k < r.horizon; ++k)
    acc += r.mean_tracking[static_cast<std::size_t>(k)];
  rep.steady_state_empirical =
      r.horizon > q0 ? acc / static_cast<double>(r.horizon - q0) : 0.0;
  rep.steady_state_bound_value =
      std::isfinite(r.rho) ? r.theta / (1.0 - r.rho)
                           : std::numeric_limits<double>::infinity();
  if (rep.steady_state_bound_value > 0.0)
    rep.ratio = rep.steady_state_empirical / rep.steady_state_bound_value;
  else
    rep.ratio = rep.steady_state_empirical > 0.0
                    ? std::numeric_limits<double>::infinity()
                    : 0.0;
  return rep;
}

}  // namespace vvsim
