#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "support/reference.hpp"
#include "vvsim/network.hpp"

using vvsim::Line;
using vvsim::NetworkMatrices;
using vvsim::RadialNetwork;
using vvsim::Scaling;

namespace {

// Impedances of the 21-bus calibration feeder (4.16 kV / 1 MVA base).
constexpr double kRpu = 0.233 / 17.3056;
constexpr double kXpu = 0.366 / 17.3056;

RadialNetwork chain21() {
  std::vector<Line> lines;
  for (int j = 1; j <= 20; ++j) lines.push_back({j - 1, j, kRpu, kXpu});
  return RadialNetwork(21, lines);
}

}  // namespace

TEST_CASE("single line operators") {
  RadialNetwork net(2, {{0, 1, 0.3, 0.4}});
  CHECK(net.n() == 1);
  CHECK(net.parent(1) == 0);
  CHECK(net.depth(1) == 1);

  const auto mat = vvsim::build_matrices(net);
  CHECK(mat.X(0, 0) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(mat.B(0, 0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(mat.D(0) == doctest::Approx(2.5).epsilon(1e-14));
  // Scaled matrix is the 1x1 identity.
  CHECK(mat.eig_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mat.eig_max == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::VectorXd q(1), vbar(1);
  q << 0.05;
  vbar << 1.0;
  CHECK(vvsim::linear_voltage(mat, q, vbar)(0) ==
        doctest::Approx(1.02).epsilon(1e-14));
}

TEST_CASE("three-bus chain has the classic nested sensitivity") {
  RadialNetwork net(4, {{0, 1, 0.0, 1.0}, {1, 2, 0.0, 2.0}, {2, 3, 0.0, 3.0}});
  const auto mat = vvsim::build_matrices(net);
  Eigen::MatrixXd expect(3, 3);
  expect << 1, 1, 1, 1, 3, 3, 1, 3, 6;
  CHECK((mat.X - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((mat.B * mat.X - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-12);
  Eigen::VectorXd d_expect(3);
  d_expect << 1.0, 1.0 / 3.0, 1.0 / 6.0;
  CHECK((mat.D - d_expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("line orientation and order do not matter") {
  RadialNetwork a(4, {{0, 1, 0.1, 1.0}, {1, 2, 0.1, 2.0}, {2, 3, 0.1, 3.0}});
  RadialNetwork b(4, {{3, 2, 0.1, 3.0}, {1, 0, 0.1, 1.0}, {2, 1, 0.1, 2.0}});
  CHECK(b.parent(1) == 0);
  CHECK(b.parent(2) == 1);
  CHECK(b.parent(3) == 2);
  const auto ma = vvsim::build_matrices(a);
  const auto mb = vvsim::build_matrices(b);
  CHECK((ma.X - mb.X).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("random trees agree with the dense flow-balance reference") {
  std::mt19937 gen(42);
  std::normal_distribution<double> inj(0.0, 0.02);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 23);
    const auto net = testref::random_tree(gen, n);
    const auto mat = vvsim::build_matrices(net);

    CHECK((mat.X - testref::x_by_path_sets(net)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((mat.B * mat.X - Eigen::MatrixXd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() < 1e-9);

    // B equals the reactance-weighted Laplacian assembled from the incidence.
    Eigen::VectorXd wx(n);
    for (int j = 1; j <= n; ++j) wx(j - 1) = 1.0 / net.line_into(j).x;
    const Eigen::MatrixXd lap =
        mat.incidence * wx.asDiagonal() * mat.incidence.transpose();
    CHECK((mat.B - lap).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::VectorXd p(n), q(n);
    for (int i = 0; i < n; ++i) {
      p(i) = inj(gen);
      q(i) = inj(gen);
    }
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd vq = vvsim::linear_voltage(
        mat, q, Eigen::VectorXd::Constant(n, net.v0()));
    const Eigen::VectorXd vq_ref = testref::lindistflow_reference(net, zero, q);
    CHECK((vq - vq_ref).cwiseAbs().maxCoeff() < 1e-9);

    const Eigen::VectorXd vp = vvsim::nominal_from_real_power(net, p);
    const Eigen::VectorXd vp_ref = testref::lindistflow_reference(net, p, zero);
    CHECK((vp - vp_ref).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("eigenvalue extremes bracket the scaled quadratic form") {
  std::mt19937 gen(7);
  const auto net = testref::random_tree(gen, 12);
  const auto mat = vvsim::build_matrices(net);
  const Eigen::VectorXd s = mat.D.cwiseSqrt();
  const Eigen::MatrixXd scaled = s.asDiagonal() * mat.X * s.asDiagonal();
  std::normal_distribution<double> nm(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd u(12);
    for (int i = 0; i < 12; ++i) u(i) = nm(gen);
    u.normalize();
    const double r = u.dot(scaled * u);
    CHECK(r >= mat.eig_min - 1e-10);
    CHECK(r <= mat.eig_max + 1e-10);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
  CHECK(mat.eig_min ==
        doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-10));
  CHECK(mat.eig_max ==
        doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-10));
}

TEST_CASE("iterative extremes match a dense solve above the size cutoff") {
  std::mt19937 gen(99);
  const auto net = testref::random_tree(gen, 600);
  const auto mat = vvsim::build_matrices(net);
  const Eigen::VectorXd s = mat.D.cwiseSqrt();
  const Eigen::MatrixXd scaled = s.asDiagonal() * mat.X * s.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
  CHECK(mat.eig_max ==
        doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-7));
  CHECK(mat.eig_min ==
        doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-6));
}

TEST_CASE("21-bus chain spectrum calibration") {
  const auto mat = vvsim::build_matrices(chain21());
  CHECK(mat.eig_min == doctest::Approx(0.0150321).epsilon(1e-4));
  CHECK(mat.eig_max == doctest::Approx(14.1764).epsilon(1e-4));
}

TEST_CASE("identity scaling uses the raw spectrum") {
  RadialNetwork net(2, {{0, 1, 0.3, 0.4}});
  const auto mat = vvsim::build_matrices(net, Scaling::identity);
  CHECK(mat.D(0) == 1.0);
  CHECK(mat.eig_min == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(mat.eig_max == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("construction rejects malformed topologies") {
  using Catch = std::invalid_argument;
  CHECK_THROWS_AS(RadialNetwork(3, {{0, 1, 0.1, 0.1}, {1, 2, 0.1, 0.1},
                                    {0, 2, 0.1, 0.1}}),
                  Catch);  // line count
  CHECK_THROWS_AS(RadialNetwork(4, {{0, 1, 0.1, 0.1}, {1, 2, 0.1, 0.1},
                                    {2, 1, 0.1, 0.1}}),
                  Catch);  // duplicate edge closes a cycle
  CHECK_THROWS_AS(RadialNetwork(5, {{0, 1, 0.1, 0.1}, {2, 3, 0.1, 0.1},
                                    {3, 4, 0.1, 0.1}, {4, 2, 0.1, 0.1}}),
                  Catch);  // island off the root
  CHECK_THROWS_AS(RadialNetwork(2, {{0, 1, 0.1, 0.0}}), Catch);   // x == 0
  CHECK_THROWS_AS(RadialNetwork(2, {{0, 1, -0.1, 0.1}}), Catch);  // r < 0
  CHECK_THROWS_AS(RadialNetwork(2, {{1, 1, 0.1, 0.1}}), Catch);   // self loop
  CHECK_THROWS_AS(RadialNetwork(2, {{0, 2, 0.1, 0.1}}), Catch);   // bus range
  CHECK_THROWS_AS(RadialNetwork(1, {}), Catch);                   // no buses
}

TEST_CASE("sweep solver reduces to the trivial fixed point at zero injection") {
  const auto net = chain21();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(20);
  const Eigen::VectorXd w = vvsim::sweep_voltage(net, zero, zero);
  CHECK((w - Eigen::VectorXd::Ones(20)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sweep-vs-linear gap shrinks quadratically with loading") {
  const auto net = chain21();
  const auto mat = vvsim::build_matrices(net);
  const auto gap = [&](double load) {
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(20, -load);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(20);
    const Eigen::VectorXd v_sweep =
        vvsim::sweep_voltage(net, p, zero).cwiseSqrt();
    const Eigen::VectorXd v_lin = vvsim::nominal_from_real_power(net, p);
    CHECK(v_sweep.maxCoeff() < 1.0);  // loads pull voltage down
    return (v_sweep - v_lin).cwiseAbs().maxCoeff();
  };
  const double g1 = gap(0.004);
  const double g2 = gap(0.002);
  CHECK(g1 < 1e-2);
  CHECK(g1 / g2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("sweep solver reports voltage collapse") {
  const auto net = chain21();
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(20, -5.0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(20);
  CHECK_THROWS_AS(vvsim::sweep_voltage(net, p, zero), std::runtime_error);
}
