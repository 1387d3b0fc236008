#include <doctest.h>

#include <cmath>

#include "pinwheel/errors.hpp"
#include "pinwheel/groundstate.hpp"

using namespace pinwheel;

// d = 1, p = 2, V = 1: w(r) = sqrt(2) sech(r).
TEST_CASE("one-dimensional soliton oracle") {
  const double w0 = std::sqrt(2.0);
  const double normV = 16.0 / 3.0;  // int w'^2 + w^2 = 4/3 + 4
  const double c_inf = normV / 4.0;
  const double aN = 2.0 * std::sqrt(2.0);
  RadialProfile P = solve_ground_state(1, 2.0, 1.0);
  CHECK(P.omega0() == doctest::Approx(w0).epsilon(1e-3));
  CHECK(norm_V2(P) == doctest::Approx(normV).epsilon(1e-3));
  CHECK(ground_energy(P) == doctest::Approx(c_inf).epsilon(1e-3));
  CHECK(P.fit.a_N == doctest::Approx(aN).epsilon(1e-3));
  for (double r : {0.5, 1.0, 3.0, 6.0}) CHECK(P.eval(r) == doctest::Approx(w0 / std::cosh(r)).epsilon(1e-4));
}

TEST_CASE("Nehari identity on the profile") {
  for (int d : {1, 2, 3}) {
    RadialProfile P = solve_ground_state(d, 2.0, 1.0);
    CHECK(norm_V2(P) == doctest::Approx(norm_2p(P)).epsilon(1e-5));
  }
}

TEST_CASE("decay exponent equals sqrt(V_inf)") {
  for (int d : {2, 3}) {
    RadialProfile P = solve_ground_state(d, 2.0, 1.0);
    CHECK(std::abs(P.fit.exponent - 1.0) < 0.02);
  }
  RadialProfile P = solve_ground_state(3, 2.0, 4.0);
  CHECK(std::abs(P.fit.exponent - 2.0) < 0.04);
}

TEST_CASE("scaling in V_inf") {
  // w_V(r) = V^{1/(2p-2)} w_1(sqrt(V) r): for p = 2 the peak doubles when V = 4.
  RadialProfile a = solve_ground_state(2, 2.0, 1.0), b = solve_ground_state(2, 2.0, 4.0);
  CHECK(b.omega0() == doctest::Approx(2.0 * a.omega0()).epsilon(1e-5));
  // energy scales as V^{p/(p-1) - d/2} = V for d = 2, p = 2
  CHECK(ground_energy(b) == doctest::Approx(4.0 * ground_energy(a)).epsilon(1e-5));
}

TEST_CASE("supercritical and invalid input are rejected") {
  CHECK_THROWS_AS(solve_ground_state(3, 3.0, 1.0), ParameterError);
  CHECK_THROWS_AS(solve_ground_state(2, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(solve_ground_state(2, 2.0, 0.0), ParameterError);
}

TEST_CASE("embedding samples the profile") {
  RadialProfile P = solve_ground_state(2, 2.0, 1.0);
  Grid g = Grid::centered(2, 33, 8.0);
  Field f = embed_radial(P, {1.0, 0.0, 0.0}, g);
  for (std::size_t k = 0; k < g.size(); k += 37) {
    auto x = g.point(k);
    CHECK(f.v[k] == doctest::Approx(P.eval(std::hypot(x[0] - 1.0, x[1]))).epsilon(1e-14));
  }
}

TEST_CASE("profile is positive and decreasing") {
  RadialProfile P = solve_ground_state(3, 1.5, 1.0);
  for (std::size_t k = 1; k < P.r.size(); ++k) {
    CHECK(P.w[k] > 0);
    CHECK(P.w[k] <= P.w[k - 1]);
  }
}
