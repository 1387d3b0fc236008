#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "pinwheel/errors.hpp"
#include "pinwheel/grid.hpp"
#include "pinwheel/symmetry.hpp"

using namespace pinwheel;

namespace {
Field sample(const Grid& g, auto f) {
  Field out(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto x = g.point(k);
    out.v[k] = f(x[0], x[1], x[2]);
  }
  return out;
}
double max_diff(const Field& a, const Field& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.v[k] - b.v[k]));
  return m;
}
Params analog(int d, int ell, int m) {
  Params p;
  p.d = d;
  p.ell = ell;
  p.m = m;
  return p;
}
}  // namespace

TEST_CASE("centered grid geometry") {
  Grid g = Grid::centered(2, 9, 5.0);
  CHECK(g.h[0] == doctest::Approx(1.0));
  CHECK(g.lo[0] == doctest::Approx(-4.0));
  CHECK(g.origin_centered());
  CHECK(g.square());
  CHECK(g.domain_measure() == doctest::Approx(100.0));
  CHECK(g.size() == 81u);
  CHECK_THROWS_AS(Grid::centered(4, 9, 1.0), ParameterError);
}

TEST_CASE("l2 inner product of a Gaussian") {
  Grid g = Grid::centered(2, 161, 10.0);
  Field f = sample(g, [](double x, double y, double) { return std::exp(-(x * x + y * y) / 2); });
  // int e^{-|x|^2} over R^2 = pi
  CHECK(l2_dot(f, f) == doctest::Approx(M_PI).epsilon(1e-10));
}

TEST_CASE("field dumps round-trip bit for bit") {
  Grid g = Grid::centered(2, 7, 3.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Field f(g);
  for (double& x : f.v) x = nd(rng);
  for (auto fmt : {DumpFormat::text, DumpFormat::binary}) {
    std::stringstream ss;
    write_field(ss, f, fmt);
    Field back = read_field(ss, fmt);
    CHECK(back.grid == g);
    CHECK(back.v == f.v);
  }
}

TEST_CASE("quarter turns are node permutations") {
  Grid g = Grid::centered(2, 16, 4.0);
  auto f = [](double x, double y, double) { return std::exp(-(x - 1) * (x - 1) - 2 * y * y) * (1 + 0.3 * x * y); };
  Field u = sample(g, f);
  // (u o R)(x) = u(Rx), R(x, y) = (-y, x)
  // node (i, j) reads node (n-1-j, i); built by index so no coordinate rounding enters
  Field want(g);
  const int n = g.n[0];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) want.v[i * n + j] = u.v[(n - 1 - j) * n + i];
  CHECK(max_diff(want, sample(g, [&](double x, double y, double z) { return f(-y, x, z); })) < 1e-14);
  CHECK(max_diff(compose_rotation(u, M_PI / 2), want) == 0.0);
  CHECK(max_diff(compose_rotation(compose_rotation(u, M_PI), M_PI), u) == 0.0);
}

TEST_CASE("band-limited rotation of a smooth field") {
  Grid g = Grid::centered(2, 96, 12.0);
  auto f = [](double x, double y, double) { return std::exp(-0.5 * ((x - 1.5) * (x - 1.5) + 2 * (y + 0.5) * (y + 0.5))); };
  Field u = sample(g, f);
  const double a = M_PI / 3;
  Field want = sample(g, [&](double x, double y, double z) {
    return f(std::cos(a) * x - std::sin(a) * y, std::sin(a) * x + std::cos(a) * y, z);
  });
  CHECK(max_diff(compose_rotation(u, a), want) < 1e-8);
}

TEST_CASE("symmetrize is a projection onto invariant fields") {
  Grid g = Grid::centered(2, 64, 10.0);
  Field u = sample(g, [](double x, double y, double) { return std::exp(-0.5 * ((x - 2) * (x - 2) + y * y)); });
  GroupSpec s = analog_spec(analog(2, 2, 6));
  Field once = symmetrize(u, s);
  Field twice = symmetrize(once, s);
  CHECK(max_diff(once, twice) < 1e-10);
}

TEST_CASE("synthesis gives exact pinwheel states") {
  Grid g = Grid::centered(2, 40, 8.0);
  Params p = analog(2, 2, 6);
  PinwheelSynthesis S(p, g);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ud(0, 1);
  Field w(g);
  for (double& x : w.v) x = ud(rng);
  SystemState s = S.apply(w);
  REQUIRE(s.ell() == 2);
  CHECK(max_diff(s.u[1], compose_rotation(s.u[0], M_PI / 2)) < 1e-13);
  for (const auto& f : s.u)
    for (double x : f.v) CHECK(x >= 0);

  // adjoint identity <B w, r> = <w, B^T r>
  std::vector<Field> r(2, Field(g));
  for (auto& f : r)
    for (double& x : f.v) x = ud(rng) - 0.5;
  double lhs = l2_dot(s.u[0], r[0]) + l2_dot(s.u[1], r[1]);
  double rhs = l2_dot(w, S.adjoint(r));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("synthesis reproduces radial fields up to interpolation error") {
  Grid g = Grid::centered(2, 128, 8.0);
  PinwheelSynthesis S(analog(2, 2, 6), g);
  Field w = sample(g, [](double x, double y, double) { return std::exp(-(x * x + y * y) / 2); });
  SystemState s = S.apply(w);
  CHECK(max_diff(s.u[0], w) < 2e-3);  // bilinear: O(h^2), h = 0.124
}

TEST_CASE("d = 1 synthesis is the even part") {
  Grid g = Grid::centered(1, 21, 5.0);
  PinwheelSynthesis S(analog(1, 2, 2), g);
  Field w = sample(g, [](double x, double, double) { return std::exp(-(x - 1) * (x - 1)); });
  SystemState s = S.apply(w);
  for (std::size_t k = 0; k < g.size(); ++k)
    CHECK(s.u[0].v[k] == doctest::Approx(0.5 * (w.v[k] + w.v[g.size() - 1 - k])));
  CHECK(s.u[1].v == s.u[0].v);
}
