#include "vvsim/control.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vvsim {

void VarLimits::validate() const {
  if (lower.size() != upper.size())
    throw std::invalid_argument("limits: lower/upper size mismatch");
  for (Eigen::Index j = 0; j < lower.size(); ++j) {
    if (!std::isfinite(lower(j)) || !std::isfinite(upper(j)))
      throw std::invalid_argument("limits: non-finite bound at bus " +
                                  std::to_string(j + 1));
    if (lower(j) > upper(j))
      throw std::invalid_argument("limits: empty box at bus " +
                                  std::to_string(j + 1));
  }
}

bool VarLimits::contains(const Eigen::VectorXd& q, double slack) const {
  if (q.size() != lower.size()) return false;
  return (q.array() >= lower.array() - slack).all() &&
         (q.array() <= upper.array() + slack).all();
}

Eigen::VectorXd VarLimits::clamp(const Eigen::VectorXd& q) const {
  if (q.size() != lower.size())
    throw std::invalid_argument("limits: clamp dimension mismatch");
  return q.cwiseMax(lower).cwiseMin(upper);
}

Eigen::VectorXd gp_step(const Eigen::VectorXd& q, const Eigen::VectorXd& v,
                        const ControllerConfig& cfg, const Eigen::VectorXd& D,
                        const VarLimits& limits,
                        const std::vector<std::uint8_t>* active) {
  const Eigen::Index n = q.size();
  if (v.size() != n || cfg.mu.size() != n || D.size() != n ||
      limits.lower.size() != n)
    throw std::invalid_argument("gp_step: dimension mismatch");
  if (active && static_cast<Eigen::Index>(active->size()) != n)
    throw std::invalid_argument("gp_step: mask size mismatch");
  if (v.hasNaN())
    throw std::invalid_argument("gp_step: voltage measurement contains NaN");
  if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
    throw std::invalid_argument("gp_step: step size must be positive");

  Eigen::VectorXd out = q;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (active && !(*active)[j]) continue;
    const double inside =
        std::min(std::max(q(j), limits.lower(j)), limits.upper(j));
    const double stepped = inside - cfg.epsilon * D(j) * (v(j) - cfg.mu(j));
    out(j) = std::min(std::max(stepped, limits.lower(j)), limits.upper(j));
  }
  return out;
}

double sync_step_size_bound(const NetworkMatrices& mat) {
  return 2.0 / mat.eig_max;
}

double classical_async_step_size_bound(const NetworkMatrices& mat, int K,
                                       int n_buses) {
  if (K < 1) throw std::invalid_argument("async bound: K must be >= 1");
  if (n_buses < 1) throw std::invalid_argument("async bound: need n >= 1");
  const double denom = 1.0 + static_cast<double>(K) +
                       static_cast<double>(n_buses) * static_cast<double>(K);
  return 1.0 / (mat.eig_max * denom);
}

double dynamic_step_size_bound(const NetworkMatrices& mat) {
  return 2.0 / (mat.eig_min + mat.eig_max);
}

}  // namespace vvsim
