#include "vvsim/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vvsim/rng.hpp"

namespace vvsim {

void Ar1Params::validate() const {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("dynamics: sigma2 must be finite and >= 0");
  if (cbar.size() == 0)
    throw std::invalid_argument("dynamics: cbar must be non-empty");
  if (!cbar.allFinite())
    throw std::invalid_argument("dynamics: cbar must be finite");
  if (A) {
    if (A->rows() != cbar.size() || A->cols() != cbar.size())
      throw std::invalid_argument("dynamics: transition matrix shape mismatch");
    const double radius =
        A->eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0))
      throw std::invalid_argument(
          "dynamics: transition matrix spectral radius " +
          std::to_string(radius) + " is not < 1");
  } else if (!(std::abs(alpha) < 1.0)) {
    throw std::invalid_argument("dynamics: |alpha| must be < 1, got " +
                                std::to_string(alpha));
  }
}

Eigen::VectorXd ar1_step(const Eigen::VectorXd& vbar, const Ar1Params& p,
                         std::uint64_t step_index) {
  if (vbar.size() != p.cbar.size())
    throw std::invalid_argument("ar1_step: dimension mismatch");
  Eigen::VectorXd out =
      p.A ? (*p.A * vbar + p.cbar).eval() : (p.alpha * vbar + p.cbar).eval();
  if (p.sigma2 > 0.0) {
    const double sigma = std::sqrt(p.sigma2);
    for (Eigen::Index j = 0; j < out.size(); ++j)
      out(j) += sigma * rng::counter_normal(p.seed, step_index,
                                            static_cast<std::uint64_t>(j));
  }
  return out;
}

StationaryStats stationary_stats(const Ar1Params& p) {
  p.validate();
  if (p.A)
    throw std::invalid_argument(
        "stationary_stats: closed form holds for the scalar transition only");
  StationaryStats s;
  s.mean = p.cbar / (1.0 - p.alpha);
  s.variance = p.sigma2 / (1.0 - p.alpha * p.alpha);
  return s;
}

Eigen::VectorXd stationary_init(const Ar1Params& p) {
  p.validate();
  if (p.A) {
    const Eigen::MatrixXd m =
        Eigen::MatrixXd::Identity(p.cbar.size(), p.cbar.size()) - *p.A;
    return m.partialPivLu().solve(p.cbar);
  }
  const StationaryStats s = stationary_stats(p);
  Eigen::VectorXd v = s.mean;
  if (s.variance > 0.0) {
    const double sd = std::sqrt(s.variance);
    for (Eigen::Index j = 0; j < v.size(); ++j)
      v(j) += sd * rng::counter_normal(p.seed, 0, static_cast<std::uint64_t>(j));
  }
  return v;
}

double expected_drift_bound(const Ar1Params& p, const Eigen::VectorXd& D) {
  p.validate();
  if (p.A)
    throw std::invalid_argument(
        "expected_drift_bound: closed form holds for the scalar transition only");
  return 2.0 * p.sigma2 * D.sum() / (1.0 + p.alpha);
}

Eigen::VectorXd declining_voltage_profile(int n) {
  if (n < 1) throw std::invalid_argument("profile: need n >= 1");
  Eigen::VectorXd v(n);
  for (int j = 1; j <= n; ++j)
    v(j - 1) = 1.025 - 0.05 * static_cast<double>(j - 1) / 19.0;
  return v;
}

void LimitsProfile::validate() const {
  base.validate();
  if (mode == Mode::scaled) {
    if (scale.empty())
      throw std::invalid_argument("limits profile: scaled mode needs a series");
    for (std::size_t k = 0; k < scale.size(); ++k)
      if (!(scale[k] > 0.0) || scale[k] > 1.0 || !std::isfinite(scale[k]))
        throw std::invalid_argument(
            "limits profile: scale[" + std::to_string(k) +
            "] must lie in (0, 1]");
  }
}

VarLimits LimitsProfile::at(std::int64_t step) const {
  if (mode == Mode::fixed) return base;
  const double s = scale[static_cast<std::size_t>(step) % scale.size()];
  return VarLimits{base.lower * s, base.upper * s};
}

}  // namespace vvsim
