#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vvsim/oracle.hpp"
#include "vvsim/scenario.hpp"

namespace vvsim {

// Per-step metrics of one realization. Row k is measured before step k's
// control update; cum_updates counts bus-updates applied strictly before k.
struct TrackingRecord {
  std::uint64_t seed = 0;
  std::vector<double> mismatch;          // ||v_k - mu||_2
  std::vector<double> objective;         // f(q_k) from the measured voltage
  std::vector<double> tracking;          // ||q_k - q*_k||^2 weighted by 1/D
  std::vector<double> oracle_objective;  // f(q*_k)
  std::vector<std::int64_t> cum_updates;
  DriftEstimate drift;  // consecutive q*_k drift statistics
  Eigen::VectorXd final_q;
};

TrackingRecord run_episode(const Scenario& sc, std::uint64_t episode_seed);

// Ensemble aggregates in fixed realization order (independent of worker
// count). The bound column is the geometric tracking ceiling seeded with the
// ensemble-mean initial error and the max drift estimate; +inf when the step
// size is outside the contraction range.
struct EnsembleResult {
  std::int64_t horizon = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> mean_mismatch, std_mismatch;
  std::vector<double> mean_objective;
  std::vector<double> mean_tracking, std_tracking;
  std::vector<double> mean_oracle_objective;
  std::vector<double> mean_cum_updates;
  std::vector<double> bound;
  double b2_max = 0.0;
  double b2_mean = 0.0;
  double initial_tracking_mean = 0.0;
  double epsilon = 0.0;
  double eig_min = 0.0;
  double eig_max = 0.0;
  double rho = 0.0;    // contraction rate (inf marks "no bound")
  double theta = 0.0;  // per-step gap
};

// workers <= 0 picks the hardware default (capped at the realization count).
EnsembleResult run_ensemble(const Scenario& sc, int realizations,
                            std::uint64_t master_seed, int workers = 0);
EnsembleResult run_ensemble(const Scenario& sc, int workers = 0);

struct BoundReport {
  bool valid_at_every_step = false;
  std::int64_t first_violation = -1;
  double max_step_ratio = 0.0;          // max_k empirical/bound
  double steady_state_empirical = 0.0;  // mean tracking over the final quartile
  double steady_state_bound_value = 0.0;
  double ratio = 0.0;                   // steady-state empirical / bound
};

BoundReport compare_bound(const EnsembleResult& r);

}  // namespace vvsim
