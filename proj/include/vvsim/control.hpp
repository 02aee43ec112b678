#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vvsim/network.hpp"

namespace vvsim {

// Per-bus box constraints on reactive injection.
struct VarLimits {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  void validate() const;  // finite, equal sizes, lower <= upper
  bool contains(const Eigen::VectorXd& q, double slack = 0.0) const;
  Eigen::VectorXd clamp(const Eigen::VectorXd& q) const;
};

struct ControllerConfig {
  double epsilon = 0.0;      // gradient step size
  Eigen::VectorXd mu;        // per-bus voltage targets
};

// One projected scaled-gradient update. Buses with active[j-1] == 0 keep
// their entry bit-for-bit; a null mask means every bus updates. Updating
// buses are first pulled into the current box (limits may have tightened
// since the last step), then stepped and re-clamped.
Eigen::VectorXd gp_step(const Eigen::VectorXd& q, const Eigen::VectorXd& v,
                        const ControllerConfig& cfg, const Eigen::VectorXd& D,
                        const VarLimits& limits,
                        const std::vector<std::uint8_t>* active = nullptr);

// Largest stable step size for the all-buses-every-step loop: 2 / eig_max.
double sync_step_size_bound(const NetworkMatrices& mat);

// Conservative bound for partial participation with maximum inter-update
// delay K over n buses: sync bound / (2 (1 + K + n K)).
double classical_async_step_size_bound(const NetworkMatrices& mat, int K,
                                       int n_buses);

// Step size achieving the best tracking contraction: 2 / (eig_min + eig_max).
double dynamic_step_size_bound(const NetworkMatrices& mat);

}  // namespace vvsim
