#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "vvsim/control.hpp"

namespace vvsim {

// Instantaneous optimal-setpoint problem:
//   minimize  f(q) = 1/2 q' X q + (vbar - mu)' q   over the limits box,
// whose unconstrained optimum makes the controlled voltage hit mu exactly.
struct QpInstance {
  Eigen::MatrixXd X;
  Eigen::VectorXd vbar;
  Eigen::VectorXd mu;
  VarLimits limits;
};

struct QpSolution {
  Eigen::VectorXd q;
  double kkt = 0.0;    // projected-gradient infinity norm at q
  int iterations = 0;  // outer rounds used
};

// Projected-gradient KKT residual: the infinity norm of g with components
// zeroed where q sits on a bound and g pushes outward. Throws if q is not
// inside the box (distinct from returning a large residual).
double kkt_residual(const QpInstance& inst, const Eigen::VectorXd& q,
                    double slack = 1e-12);

// Reusable solver bound to one sensitivity matrix. Newton steps restricted
// to the free set with a projected backtracking line search; the Cholesky
// factor is recomputed only when the clamp pattern changes, and a scaled
// projected-gradient sweep covers the rare non-descent corner. Warm-started
// from the previous solution, which makes tracking runs cheap.
class BoxQpSolver {
 public:
  BoxQpSolver(Eigen::MatrixXd X, Eigen::VectorXd D, double eig_min,
              double eig_max);

  Eigen::VectorXd solve(const Eigen::VectorXd& vbar, const Eigen::VectorXd& mu,
                        const VarLimits& limits, double tol = 1e-12,
                        int* rounds_out = nullptr);
  void reset_warm_start() { warm_.reset(); }

  int max_rounds = 500;

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd D_;
  double fallback_step_;
  std::optional<Eigen::VectorXd> warm_;
  std::vector<std::uint8_t> pattern_;
  std::vector<int> free_idx_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  bool have_factor_ = false;
};

// One-shot convenience wrapper (builds scaling and spectrum internally).
QpSolution solve_box_qp(const QpInstance& inst, double tol = 1e-12);

// Geometric tracking-error recursion constants. With the default coupling
// choice (beta unset) the per-step rate is 1 - eps*cm/(c+m) for
// cm = eig_min*eig_max / ... spelled out in the implementation.
struct BoundParams {
  double eig_min = 0.0;
  double eig_max = 0.0;
  double epsilon = 0.0;
  std::optional<double> beta = std::nullopt;  // Young-inequality coupling
  double drift_sq = 0.0;                      // per-step optimal-point drift bound

  void validate() const;
};

double default_beta(double eig_min, double eig_max, double epsilon);
double contraction_rate(const BoundParams& bp);   // rho, must be < 1
double per_step_gap(const BoundParams& bp);       // Theta
// rho^k * initial + (1 - rho^k)/(1 - rho) * Theta
double tracking_bound(const BoundParams& bp, double initial_err_sq,
                      std::int64_t k);
double steady_state_bound(const BoundParams& bp);  // Theta / (1 - rho)

struct DriftEstimate {
  double max_sq = 0.0;
  double mean_sq = 0.0;
  std::int64_t samples = 0;
};

// Consecutive-difference drift of an optimal-setpoint trace, measured in the
// norm weighted by 1/D.
DriftEstimate estimate_drift(const std::vector<Eigen::VectorXd>& trace,
                             const Eigen::VectorXd& D);

}  // namespace vvsim
