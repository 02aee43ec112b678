#include "vvsim/network.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vvsim {

namespace {

std::string line_name(const Line& l) {
  return std::to_string(l.from) + "-" + std::to_string(l.to);
}

}  // namespace

RadialNetwork::RadialNetwork(int bus_count, std::vector<Line> lines, double v0)
    : v0_(v0) {
  if (bus_count < 2)
    throw std::invalid_argument(
        "network: need the root plus at least one bus, got bus_count=" +
        std::to_string(bus_count));
  n_ = bus_count - 1;
  if (static_cast<int>(lines.size()) != n_)
    throw std::invalid_argument(
        "network: a radial feeder with " + std::to_string(bus_count) +
        " buses needs exactly " + std::to_string(n_) + " lines, got " +
        std::to_string(lines.size()));
  if (!(v0 > 0.0))
    throw std::invalid_argument("network: root voltage must be positive");

  for (const Line& l : lines) {
    if (l.from < 0 || l.from > n_ || l.to < 0 || l.to > n_)
      throw std::invalid_argument("network: line " + line_name(l) +
                                  " references a bus outside 0.." +
                                  std::to_string(n_));
    if (l.from == l.to)
      throw std::invalid_argument("network: line " + line_name(l) +
                                  " is a self-loop");
    if (!(l.x > 0.0))
      throw std::invalid_argument("network: line " + line_name(l) +
                                  " must have x > 0");
    if (l.r < 0.0 || !std::isfinite(l.r) || !std::isfinite(l.x))
      throw std::invalid_argument("network: line " + line_name(l) +
                                  " has an invalid impedance");
  }

  // Adjacency (undirected); orientation is normalized by the BFS below.
  std::vector<std::vector<std::pair<int, int>>> adj(bus_count);  // (nbr, line idx)
  for (int e = 0; e < n_; ++e) {
    adj[lines[e].from].push_back({lines[e].to, e});
    adj[lines[e].to].push_back({lines[e].from, e});
  }

  parent_.assign(bus_count, -1);
  depth_.assign(bus_count, 0);
  line_into_.assign(bus_count, Line{});
  children_.assign(bus_count, {});
  std::vector<char> seen(bus_count, 0);
  std::vector<int> used_line(bus_count, -1);

  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (auto [w, e] : adj[u]) {
      if (e == used_line[u]) continue;  // the tree edge we arrived through
      if (seen[w])
        throw std::invalid_argument("network: line " + line_name(lines[e]) +
                                    " closes a cycle");
      seen[w] = 1;
      used_line[w] = e;
      parent_[w] = u;
      depth_[w] = depth_[u] + 1;
      Line l = lines[e];
      if (l.from != u) std::swap(l.from, l.to);
      line_into_[w] = l;
      children_[u].push_back(w);
      queue.push_back(w);
      if (w != 0) topo_.push_back(w);
    }
  }
  for (int b = 0; b < bus_count; ++b)
    if (!seen[b])
      throw std::invalid_argument("network: bus " + std::to_string(b) +
                                  " is not connected to the root");
}

std::pair<double, double> spd_eigen_extremes(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols() || n == 0)
    throw std::invalid_argument("eigen extremes: matrix must be square");
  if (n <= 512) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("eigen extremes: dense solver failed");
    return {es.eigenvalues()(0), es.eigenvalues()(n - 1)};
  }

  // Large case: power iteration for the top, inverse iteration (Cholesky)
  // for the bottom. Residual target 1e-10 relative to the top eigenvalue.
  const auto iterate = [n](const auto& apply, double scale_hint) {
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i)
      u(i) = std::cos(0.7 * static_cast<double>(i) + 0.3);  // fixed start
    u.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 200000; ++it) {
      Eigen::VectorXd w = apply(u);
      lambda = u.dot(w);
      const double resid = (w - lambda * u).norm();
      u = w / w.norm();
      if (resid <= 1e-10 * scale_hint) return std::pair<double, double>{lambda, resid};
    }
    throw std::runtime_error("eigen extremes: iteration did not converge");
  };

  const auto [lmax, rmax] =
      iterate([&](const Eigen::VectorXd& u) { return (a * u).eval(); },
              a.diagonal().maxCoeff() * static_cast<double>(n));
  (void)rmax;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("eigen extremes: matrix is not positive definite");
  // Inverse iteration converges on 1/eig_min; demand the same residual on
  // the original matrix: ||a u - mu u|| = mu * nu * ||inv-residual||-ish, so
  // iterate until the Rayleigh quotient of the inverse stabilizes.
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i)
    u(i) = std::sin(0.41 * static_cast<double>(i) + 1.1);
  u.normalize();
  double mu = 0.0;
  bool ok = false;
  for (int it = 0; it < 200000; ++it) {
    Eigen::VectorXd w = llt.solve(u);
    u = w / w.norm();
    mu = u.dot(a * u);
    const double resid = (a * u - mu * u).norm();
    if (resid <= 1e-10 * lmax) {
      ok = true;
      break;
    }
  }
  if (!ok)
    throw std::runtime_error("eigen extremes: inverse iteration did not converge");
  return {mu, lmax};
}

NetworkMatrices build_matrices(const RadialNetwork& net, Scaling scaling) {
  const int n = net.n();
  NetworkMatrices mat;
  mat.scaling = scaling;

  Eigen::MatrixXd inc = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd dx(n);
  for (int j = 1; j <= n; ++j) {
    inc(j - 1, j - 1) = -1.0;
    if (net.parent(j) >= 1) inc(net.parent(j) - 1, j - 1) = 1.0;
    dx(j - 1) = net.line_into(j).x;
  }
  mat.incidence = inc;

  // Route 1: the incidence identity, via generic dense inversion.
  const Eigen::MatrixXd inv = Eigen::PartialPivLU<Eigen::MatrixXd>(inc).inverse();
  const Eigen::MatrixXd x_ident = inv.transpose() * dx.asDiagonal() * inv;

  // Route 2: entry (i, j) is the reactance-length of the shared root path,
  // i.e. the x-depth of the lowest common ancestor.
  std::vector<double> xdepth(n + 1, 0.0);
  for (int j : net.topo_order())
    xdepth[j] = xdepth[net.parent(j)] + net.line_into(j).x;
  Eigen::MatrixXd x_path(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      int a = i, b = j;
      while (net.depth(a) > net.depth(b)) a = net.parent(a);
      while (net.depth(b) > net.depth(a)) b = net.parent(b);
      while (a != b) {
        a = net.parent(a);
        b = net.parent(b);
      }
      x_path(i - 1, j - 1) = x_path(j - 1, i - 1) = xdepth[a];
    }
  }

  const double scale = x_path.cwiseAbs().maxCoeff();
  const double gap = (x_ident - x_path).cwiseAbs().maxCoeff();
  if (gap > 1e-10 * std::max(1.0, scale))
    throw std::runtime_error(
        "network matrices: sensitivity cross-check failed, max deviation " +
        std::to_string(gap));
  mat.X = x_path;

  // X^{-1} assembled directly as the reactance-weighted reduced Laplacian.
  mat.B = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j <= n; ++j) {
    const double w = 1.0 / net.line_into(j).x;
    mat.B(j - 1, j - 1) += w;
    const int p = net.parent(j);
    if (p >= 1) {
      mat.B(p - 1, p - 1) += w;
      mat.B(p - 1, j - 1) -= w;
      mat.B(j - 1, p - 1) -= w;
    }
  }

  mat.D = (scaling == Scaling::newton_diag)
              ? mat.X.diagonal().cwiseInverse().eval()
              : Eigen::VectorXd::Ones(n).eval();

  const Eigen::VectorXd s = mat.D.cwiseSqrt();
  const Eigen::MatrixXd scaled = s.asDiagonal() * mat.X * s.asDiagonal();
  std::tie(mat.eig_min, mat.eig_max) =
      spd_eigen_extremes(0.5 * (scaled + scaled.transpose()));
  return mat;
}

Eigen::VectorXd linear_voltage(const NetworkMatrices& mat,
                               const Eigen::VectorXd& q,
                               const Eigen::VectorXd& vbar) {
  if (q.size() != mat.X.rows() || vbar.size() != mat.X.rows())
    throw std::invalid_argument("linear_voltage: dimension mismatch");
  return mat.X * q + vbar;
}

Eigen::VectorXd nominal_from_real_power(const RadialNetwork& net,
                                        const Eigen::VectorXd& p) {
  const int n = net.n();
  if (p.size() != n)
    throw std::invalid_argument("nominal_from_real_power: dimension mismatch");
  // Flow on the line into j is minus the subtree injection sum; accumulate
  // leaf-to-root, then drop voltages root-to-leaf.
  std::vector<double> flow(n + 1, 0.0);
  const auto& topo = net.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int j = *it;
    flow[j] -= p(j - 1);
    if (net.parent(j) >= 1) flow[net.parent(j)] += flow[j];
  }
  Eigen::VectorXd v(n);
  for (int j : topo) {
    const double up = net.parent(j) >= 1 ? v(net.parent(j) - 1) : net.v0();
    v(j - 1) = up - net.line_into(j).r * flow[j];
  }
  return v;
}

Eigen::VectorXd sweep_voltage(const RadialNetwork& net, const Eigen::VectorXd& p,
                              const Eigen::VectorXd& q,
                              const SweepOptions& opt) {
  const int n = net.n();
  if (p.size() != n || q.size() != n)
    throw std::invalid_argument("sweep_voltage: dimension mismatch");

  const auto& topo = net.topo_order();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, net.v0() * net.v0());
  std::vector<double> fp(n + 1), fq(n + 1), cur(n + 1);

  for (int it = 0; it < opt.max_iters; ++it) {
    // Backward: receiving-end flows with losses from downstream lines.
    std::fill(fp.begin(), fp.end(), 0.0);
    std::fill(fq.begin(), fq.end(), 0.0);
    for (auto rit = topo.rbegin(); rit != topo.rend(); ++rit) {
      const int j = *rit;
      fp[j] -= p(j - 1);
      fq[j] -= q(j - 1);
      cur[j] = (fp[j] * fp[j] + fq[j] * fq[j]) / v(j - 1);
      const int par = net.parent(j);
      if (par >= 1) {
        const Line& l = net.line_into(j);
        fp[par] += fp[j] + l.r * cur[j];
        fq[par] += fq[j] + l.x * cur[j];
      }
    }
    // Forward: propagate squared magnitudes from the root.
    double delta = 0.0;
    for (int j : topo) {
      const Line& l = net.line_into(j);
      const double up =
          net.parent(j) >= 1 ? v(net.parent(j) - 1) : net.v0() * net.v0();
      const double next = up - 2.0 * (l.r * fp[j] + l.x * fq[j]) -
                          (l.r * l.r + l.x * l.x) * cur[j];
      if (!(next > 0.0))
        throw std::runtime_error(
            "sweep_voltage: voltage collapsed at bus " + std::to_string(j) +
            "; the operating point is outside the solvable region");
      delta = std::max(delta, std::abs(next - v(j - 1)));
      v(j - 1) = next;
    }
    if (delta < opt.tol) return v;
  }
  throw std::runtime_error("sweep_voltage: no convergence after " +
                           std::to_string(opt.max_iters) + " passes");
}

}  // namespace vvsim
