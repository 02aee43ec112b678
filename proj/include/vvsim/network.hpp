#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace vvsim {

// A distribution line between two buses. `from`/`to` may be given in either
// orientation in input files; the network normalizes them so that `from` is
// the bus closer to the root.
struct Line {
  int from = 0;
  int to = 0;
  double r = 0.0;  // resistance, p.u.
  double x = 0.0;  // reactance, p.u. (must be positive)
};

// Radial (tree) feeder. Bus 0 is the substation with fixed voltage; buses
// 1..n() carry injections. Construction rejects anything that is not a tree
// rooted at bus 0 and any line with x <= 0 or r < 0.
class RadialNetwork {
 public:
  RadialNetwork(int bus_count, std::vector<Line> lines, double v0 = 1.0);

  int n() const noexcept { return n_; }  // number of non-root buses
  double v0() const noexcept { return v0_; }

  // Parent of bus j (j in 1..n); the root is bus 0.
  int parent(int bus) const { return parent_.at(bus); }
  // Hop count from the root to bus j.
  int depth(int bus) const { return depth_.at(bus); }
  // The line feeding bus j, normalized so from == parent(j).
  const Line& line_into(int bus) const { return line_into_.at(bus); }
  // Buses 1..n ordered parents-first.
  const std::vector<int>& topo_order() const noexcept { return topo_; }
  const std::vector<std::vector<int>>& children() const noexcept {
    return children_;
  }

 private:
  int n_ = 0;
  double v0_ = 1.0;
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<Line> line_into_;  // index by downstream bus; [0] unused
  std::vector<int> topo_;
  std::vector<std::vector<int>> children_;
};

enum class Scaling { newton_diag, identity };

// Dense operators of the linearized feeder model v = X q + vbar.
struct NetworkMatrices {
  Eigen::MatrixXd incidence;  // reduced incidence; column j-1 is the line into bus j
  Eigen::MatrixXd X;          // reactance-weighted voltage sensitivity (SPD)
  Eigen::MatrixXd B;          // X^{-1}: reactance-weighted reduced Laplacian
  Eigen::VectorXd D;          // controller scaling diagonal
  double eig_min = 0.0;       // smallest eigenvalue of D^{1/2} X D^{1/2}
  double eig_max = 0.0;       // largest eigenvalue of D^{1/2} X D^{1/2}
  Scaling scaling = Scaling::newton_diag;
};

// Builds X two independent ways (dense inverse of the incidence identity, and
// root-path intersection sums) and cross-checks them before returning.
// Scaling newton_diag sets D = diag(X)^{-1}; identity sets D = 1.
NetworkMatrices build_matrices(const RadialNetwork& net,
                               Scaling scaling = Scaling::newton_diag);

// v = X q + vbar, with dimension checks.
Eigen::VectorXd linear_voltage(const NetworkMatrices& mat,
                               const Eigen::VectorXd& q,
                               const Eigen::VectorXd& vbar);

// Zero-injection voltage profile v0 + R p for real-power injections p
// (positive = generation), used to derive driving profiles from load data.
Eigen::VectorXd nominal_from_real_power(const RadialNetwork& net,
                                        const Eigen::VectorXd& p);

struct SweepOptions {
  double tol = 1e-10;   // max |change in squared voltage| per pass
  int max_iters = 200;
};

// Nonlinear backward/forward sweep power flow on squared voltage magnitudes,
// with line losses. p and q are bus injections (positive = generation).
// Returns squared magnitudes for buses 1..n. Throws on non-convergence.
Eigen::VectorXd sweep_voltage(const RadialNetwork& net, const Eigen::VectorXd& p,
                              const Eigen::VectorXd& q,
                              const SweepOptions& opt = {});

// Extreme eigenvalues (min, max) of a symmetric positive definite matrix.
// Dense solver up to 512x512, power/inverse iteration above.
std::pair<double, double> spd_eigen_extremes(const Eigen::MatrixXd& a);

}  // namespace vvsim
