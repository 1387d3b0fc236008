#include <doctest.h>

#include <cmath>
#include <random>

#include "pinwheel/errors.hpp"
#include "pinwheel/groups.hpp"

using namespace pinwheel;

namespace {
double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("theta and rho are orthogonal with the expected orders") {
  for (int m : {2, 4, 6, 10}) {
    for (int j = 0; j < m; ++j) CHECK(theta_action(m, j, 4).orthogonality_defect() < 1e-12);
    Isometry t = theta_action(m, 1, 4), acc = theta_action(m, 0, 4);
    for (int j = 0; j < m; ++j) acc = acc * t;
    CHECK(max_abs(acc.matrix - Eigen::MatrixXd::Identity(4, 4)) < 1e-12);
  }
  for (int ell : {2, 3, 5}) {
    Isometry r = rho_action(ell, 1, 4), acc = rho_action(ell, 0, 4);
    for (int n = 0; n < ell; ++n) acc = acc * r;
    // rho^ell acts as -Id on C^2
    CHECK(max_abs(acc.matrix + Eigen::MatrixXd::Identity(4, 4)) < 1e-12);
  }
}

TEST_CASE("group law and commutation") {
  const int m = 6, ell = 3;
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      CHECK(max_abs((theta_action(m, j, 4) * theta_action(m, k, 4)).matrix - theta_action(m, j + k, 4).matrix) < 1e-12);
  for (int j = 0; j < m; ++j)
    for (int n = 0; n < ell; ++n) {
      auto a = theta_action(m, j, 4) * rho_action(ell, n, 4);
      auto b = rho_action(ell, n, 4) * theta_action(m, j, 4);
      CHECK(max_abs(a.matrix - b.matrix) < 1e-12);
    }
  auto t = theta_action(m, 2, 4);
  CHECK(max_abs((t * t.inverse()).matrix - Eigen::MatrixXd::Identity(4, 4)) < 1e-12);
}

TEST_CASE("tau squares to minus identity") {
  Eigen::Matrix4d t = tau_matrix();
  CHECK(max_abs(t * t.transpose() - Eigen::Matrix4d::Identity()) < 1e-15);
  CHECK(max_abs(t * t + Eigen::Matrix4d::Identity()) < 1e-15);
}

TEST_CASE("odd m is rejected") {
  CHECK_THROWS_AS(theta_action(5, 1, 4), ParameterError);
  GroupSpec s;
  s.m = 7;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  CHECK_THROWS_AS(rho_action(1, 0, 4), ParameterError);
}

TEST_CASE("separation constants") {
  // Oracles: 2 sin(pi/6) = 1, 2 sin(pi/4) = sqrt 2.
  auto c = separation_constants(6, 2);
  CHECK(c.intra == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.inter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(c.existence_ok);
  CHECK_FALSE(c.strong_ok);
  CHECK_FALSE(separation_constants(8, 2).strong_ok);
  CHECK(separation_constants(10, 2).strong_ok);
  CHECK_FALSE(separation_constants(4, 2).existence_ok);
}

TEST_CASE("orbit distances match the closed forms") {
  for (auto [m, ell] : {std::pair{6, 2}, {8, 2}, {10, 2}, {10, 3}}) {
    GroupSpec s;
    s.m = m;
    s.ell = ell;
    Eigen::VectorXd base = Eigen::VectorXd::Zero(4);
    base(0) = 1;
    auto orb = orbit_points(base, s);
    CHECK(orb.points.size() == std::size_t(m * ell));
    auto od = orbit_distances(orb);
    CHECK(std::abs(od.intra - 2 * std::sin(M_PI / m)) < 1e-12);
    CHECK(std::abs(od.inter - 2 * std::sin(M_PI / (2 * ell))) < 1e-12);
  }
}

TEST_CASE("random group words stay orthogonal") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> pick(0, 9);
  for (int trial = 0; trial < 200; ++trial) {
    Isometry acc = theta_action(10, 0, 6);
    for (int k = 0; k < 8; ++k)
      acc = acc * (pick(rng) % 2 ? theta_action(10, pick(rng), 6) : rho_action(3, pick(rng), 6));
    CHECK(acc.orthogonality_defect() < 1e-12);
  }
}

TEST_CASE("analog mode rotates the first plane") {
  auto r = rho_action(2, 1, 2, GroupMode::analog);
  Eigen::Vector2d x(1, 0);
  CHECK((r.apply(x) - Eigen::Vector2d(0, 1)).norm() < 1e-15);
  auto t = theta_action(6, 1, 3, GroupMode::analog);
  CHECK(std::abs(t.matrix(2, 2) - 1) < 1e-15);
}
