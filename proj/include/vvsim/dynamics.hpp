#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "vvsim/control.hpp"

namespace vvsim {

// First-order autoregressive model for the uncontrolled voltage profile:
//   vbar_{k+1} = alpha * vbar_k + cbar + eta_k,   eta_k ~ N(0, sigma2 I).
// An explicit transition matrix A generalizes the scalar alpha; the scalar
// path is the one exercised by the shipped scenarios.
struct Ar1Params {
  double alpha = 0.0;
  double sigma2 = 0.0;
  Eigen::VectorXd cbar;
  std::uint64_t seed = 0;
  std::optional<Eigen::MatrixXd> A;

  void validate() const;  // |alpha| < 1 (or spectral radius of A < 1), sigma2 >= 0
};

// One transition. Noise is counter-addressed by (seed, step_index, bus), so a
// trajectory is a pure function of the parameters; step_index 0 is reserved
// for the initial draw and transitions should pass indices >= 1.
Eigen::VectorXd ar1_step(const Eigen::VectorXd& vbar, const Ar1Params& p,
                         std::uint64_t step_index);

struct StationaryStats {
  Eigen::VectorXd mean;  // cbar / (1 - alpha)
  double variance = 0.0; // sigma2 / (1 - alpha^2), per bus
};

// Scalar-transition stationary moments; rejects an explicit matrix A.
StationaryStats stationary_stats(const Ar1Params& p);

// A draw from the stationary distribution (deterministic in p.seed). With an
// explicit A, returns the stationary mean (I - A)^{-1} cbar without noise.
Eigen::VectorXd stationary_init(const Ar1Params& p);

// Closed form for the stationary expected squared profile step measured in
// the weighted norm sum_j D_j dv_j^2:  2 sigma2 sum(D) / (1 + alpha).
double expected_drift_bound(const Ar1Params& p, const Eigen::VectorXd& D);

// Linearly declining target profile: 1.025 at the first bus down to 0.975 at
// bus 20, same slope for other sizes.
Eigen::VectorXd declining_voltage_profile(int n);

// Reactive-capacity envelope over time. `fixed` keeps the base box; `scaled`
// multiplies it by a positive per-step factor, cycling if the series is
// shorter than the horizon.
struct LimitsProfile {
  enum class Mode { fixed, scaled };
  Mode mode = Mode::fixed;
  VarLimits base;
  std::vector<double> scale;

  void validate() const;
  VarLimits at(std::int64_t step) const;
  bool varies() const { return mode == Mode::scaled && scale.size() > 1; }
};

}  // namespace vvsim
