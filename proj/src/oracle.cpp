#include "vvsim/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "vvsim/network.hpp"

namespace vvsim {

namespace {

// Gradient with components zeroed where the point sits on a bound and the
// gradient pushes further outward; its infinity norm is the stationarity
// measure used everywhere.
double projected_gradient_norm(const Eigen::VectorXd& q,
                               const Eigen::VectorXd& g, const VarLimits& lim,
                               double slack) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    double gj = g(j);
    if (q(j) <= lim.lower(j) + slack && gj > 0.0) gj = 0.0;
    if (q(j) >= lim.upper(j) - slack && gj < 0.0) gj = 0.0;
    worst = std::max(worst, std::abs(gj));
  }
  return worst;
}

inline double objective(const Eigen::VectorXd& q, const Eigen::VectorXd& g,
                        const Eigen::VectorXd& c) {
  // 1/2 q'Xq + c'q given g = Xq + c.
  return 0.5 * q.dot(g + c);
}

}  // namespace

double kkt_residual(const QpInstance& inst, const Eigen::VectorXd& q,
                    double slack) {
  inst.limits.validate();
  if (q.size() != inst.X.rows() || inst.vbar.size() != inst.X.rows() ||
      inst.mu.size() != inst.X.rows())
    throw std::invalid_argument("kkt_residual: dimension mismatch");
  if (!inst.limits.contains(q, slack))
    throw std::domain_error(
        "kkt_residual: point lies outside the limits box; residual undefined");
  const Eigen::VectorXd g = inst.X * q + (inst.vbar - inst.mu);
  return projected_gradient_norm(q, g, inst.limits, slack);
}

BoxQpSolver::BoxQpSolver(Eigen::MatrixXd X, Eigen::VectorXd D, double eig_min,
                         double eig_max)
    : X_(std::move(X)), D_(std::move(D)) {
  if (X_.rows() != X_.cols() || D_.size() != X_.rows())
    throw std::invalid_argument("oracle: matrix/scaling shape mismatch");
  if (!(eig_min > 0.0) || !(eig_max >= eig_min))
    throw std::invalid_argument("oracle: spectrum bounds must satisfy 0 < min <= max");
  fallback_step_ = 2.0 / (eig_min + eig_max);
}

Eigen::VectorXd BoxQpSolver::solve(const Eigen::VectorXd& vbar,
                                   const Eigen::VectorXd& mu,
                                   const VarLimits& limits, double tol,
                                   int* rounds_out) {
  const Eigen::Index n = X_.rows();
  if (vbar.size() != n || mu.size() != n)
    throw std::invalid_argument("oracle: dimension mismatch");
  limits.validate();
  if (limits.lower.size() != n)
    throw std::invalid_argument("oracle: limits dimension mismatch");

  const Eigen::VectorXd c = vbar - mu;
  Eigen::VectorXd q =
      limits.clamp(warm_ ? *warm_ : Eigen::VectorXd::Zero(n));
  Eigen::VectorXd g = X_ * q + c;
  double f = objective(q, g, c);

  std::vector<std::uint8_t> pat(static_cast<std::size_t>(n));
  int round = 0;
  for (; round < max_rounds; ++round) {
    if (projected_gradient_norm(q, g, limits, 0.0) <= tol) break;

    for (Eigen::Index j = 0; j < n; ++j)
      pat[static_cast<std::size_t>(j)] =
          (q(j) <= limits.lower(j) && g(j) > 0.0) ||
          (q(j) >= limits.upper(j) && g(j) < 0.0);

    if (!have_factor_ || pat != pattern_) {
      pattern_ = pat;
      free_idx_.clear();
      for (Eigen::Index j = 0; j < n; ++j)
        if (!pat[static_cast<std::size_t>(j)])
          free_idx_.push_back(static_cast<int>(j));
      const Eigen::Index nf = static_cast<Eigen::Index>(free_idx_.size());
      Eigen::MatrixXd xff(nf, nf);
      for (Eigen::Index a = 0; a < nf; ++a)
        for (Eigen::Index b = 0; b < nf; ++b)
          xff(a, b) = X_(free_idx_[a], free_idx_[b]);
      llt_.compute(xff);
      have_factor_ = llt_.info() == Eigen::Success;
    }

    bool moved = false;
    if (have_factor_ && !free_idx_.empty()) {
      // Newton target on the free set: X_ff t = -(c + X q_clamped)_free.
      Eigen::VectorXd q_clamped = q;
      for (int j : free_idx_) q_clamped(j) = 0.0;
      const Eigen::VectorXd rhs_full = -(c + X_ * q_clamped);
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(free_idx_.size()));
      for (std::size_t a = 0; a < free_idx_.size(); ++a)
        rhs(static_cast<Eigen::Index>(a)) = rhs_full(free_idx_[a]);
      const Eigen::VectorXd target = llt_.solve(rhs);

      Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
      for (std::size_t a = 0; a < free_idx_.size(); ++a)
        step(free_idx_[a]) = target(static_cast<Eigen::Index>(a)) -
                             q(free_idx_[a]);

      if (step.dot(g) < 0.0) {
        double trial = 1.0;
        for (int ls = 0; ls < 60; ++ls) {
          const Eigen::VectorXd qc = limits.clamp(q + trial * step);
          const Eigen::VectorXd gc = X_ * qc + c;
          const double fc = objective(qc, gc, c);
          // Projected Armijo: sufficient decrease against the achieved move.
          if (fc <= f - 0.1 * g.dot(q - qc)) {
            q = qc;
            g = gc;
            f = fc;
            moved = true;
            break;
          }
          trial *= 0.6;
        }
      }
    }

    if (!moved) {
      // Scaled projected-gradient sweep; contracts the distance to the
      // optimum regardless of the clamp pattern.
      q = limits.clamp(q - fallback_step_ * D_.cwiseProduct(g));
      g = X_ * q + c;
      f = objective(q, g, c);
    }
  }

  const double res = projected_gradient_norm(q, g, limits, 0.0);
  if (res > tol)
    throw std::runtime_error(
        "oracle: hit the iteration cap (" + std::to_string(max_rounds) +
        " rounds) at residual " + std::to_string(res) +
        ", required " + std::to_string(tol));
  warm_ = q;
  if (rounds_out) *rounds_out = round;
  return q;
}

QpSolution solve_box_qp(const QpInstance& inst, double tol) {
  const Eigen::VectorXd d = inst.X.diagonal().cwiseInverse();
  const Eigen::VectorXd s = d.cwiseSqrt();
  const Eigen::MatrixXd scaled = s.asDiagonal() * inst.X * s.asDiagonal();
  const auto [lo, hi] =
      spd_eigen_extremes(0.5 * (scaled + scaled.transpose()));
  BoxQpSolver solver(inst.X, d, lo, hi);
  QpSolution sol;
  sol.q = solver.solve(inst.vbar, inst.mu, inst.limits, tol, &sol.iterations);
  sol.kkt = kkt_residual(inst, sol.q);
  return sol;
}

void BoundParams::validate() const {
  if (!(eig_min > 0.0) || !(eig_max >= eig_min))
    throw std::invalid_argument("bound: spectrum must satisfy 0 < min <= max");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("bound: step size must be positive");
  if (epsilon > 2.0 / (eig_min + eig_max) * (1.0 + 1e-12))
    throw std::invalid_argument(
        "bound: recursion requires epsilon <= 2/(eig_min+eig_max); got epsilon=" +
        std::to_string(epsilon));
  if (!(drift_sq >= 0.0))
    throw std::invalid_argument("bound: drift must be >= 0");
  if (beta && !(*beta > 0.0))
    throw std::invalid_argument("bound: coupling beta must be positive");
}

double default_beta(double eig_min, double eig_max, double epsilon) {
  const double a = epsilon * eig_min * eig_max / (eig_min + eig_max);
  const double denom = 1.0 - 2.0 * a;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return a / denom;
}

double contraction_rate(const BoundParams& bp) {
  bp.validate();
  const double a =
      bp.epsilon * bp.eig_min * bp.eig_max / (bp.eig_min + bp.eig_max);
  if (!bp.beta) return 1.0 - a;  // (1+beta)(1-2a) at the optimal coupling
  const double rho = (1.0 + *bp.beta) * (1.0 - 2.0 * a);
  if (!(rho < 1.0))
    throw std::invalid_argument(
        "bound: no contraction for epsilon=" + std::to_string(bp.epsilon) +
        ", beta=" + std::to_string(*bp.beta) + " (rate " + std::to_string(rho) +
        " >= 1)");
  return rho;
}

double per_step_gap(const BoundParams& bp) {
  bp.validate();
  if (!bp.beta) {
    const double a =
        bp.epsilon * bp.eig_min * bp.eig_max / (bp.eig_min + bp.eig_max);
    return (1.0 - a) / a * bp.drift_sq;
  }
  return (1.0 + 1.0 / *bp.beta) * bp.drift_sq;
}

double tracking_bound(const BoundParams& bp, double initial_err_sq,
                      std::int64_t k) {
  if (k < 0) throw std::invalid_argument("bound: step index must be >= 0");
  if (!(initial_err_sq >= 0.0))
    throw std::invalid_argument("bound: initial error must be >= 0");
  const double rho = contraction_rate(bp);
  const double theta = per_step_gap(bp);
  const double pk = std::pow(rho, static_cast<double>(k));
  return pk * initial_err_sq + (1.0 - pk) / (1.0 - rho) * theta;
}

double steady_state_bound(const BoundParams& bp) {
  return per_step_gap(bp) / (1.0 - contraction_rate(bp));
}

DriftEstimate estimate_drift(const std::vector<Eigen::VectorXd>& trace,
                             const Eigen::VectorXd& D) {
  DriftEstimate est;
  if (trace.size() < 2) return est;
  double total = 0.0;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    if (trace[k].size() != D.size() || trace[k - 1].size() != D.size())
      throw std::invalid_argument("drift: dimension mismatch");
    const Eigen::VectorXd d = trace[k] - trace[k - 1];
    const double w = d.cwiseQuotient(D).dot(d);
    est.max_sq = std::max(est.max_sq, w);
    total += w;
    ++est.samples;
  }
  est.mean_sq = total / static_cast<double>(est.samples);
  return est;
}

}  // namespace vvsim
