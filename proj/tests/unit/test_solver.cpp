#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pinwheel/errors.hpp"
#include "pinwheel/groundstate.hpp"
#include "pinwheel/solver.hpp"

using namespace pinwheel;

namespace {

Params analog(int d, int ell, int m, double beta) {
  Params p;
  p.d = d;
  p.ell = ell;
  p.m = m;
  p.beta = beta;
  return p;
}

const RadialProfile& prof2() {
  static RadialProfile P = solve_ground_state(2, 2.0, 1.0);
  return P;
}

SystemState small_ansatz(double beta, int m = 6) {
  Params p = analog(2, 2, m, beta);
  p.pot.kind = PotentialSpec::Kind::exp_tail;
  p.pot.A = -0.5;
  p.pot.kappa = 0.3;
  return ansatz_state(p, Grid::centered(2, 48, 9.0), prof2(), 3.0);
}

}  // namespace

TEST_CASE("decoupled solitons are recovered in one dimension") {
  Params p = analog(1, 2, 2, 0.0);
  RadialProfile P = solve_ground_state(1, 2.0, 1.0);
  Grid g = Grid::centered(1, 801, 20.0);
  SystemState s;
  s.params = p;
  s.u.assign(2, embed_radial(P, {0, 0, 0}, g));
  SolveOptions o;
  SolveResult r = minimize(s, o);
  CHECK(r.diag.converged);
  CHECK(r.diag.iterations < 50);
  CHECK(r.energy == doctest::Approx(2 * 4.0 / 3).epsilon(1e-3));
}

TEST_CASE("descent is monotone and stays on the constraint") {
  SolveOptions o;
  o.max_iters = 150;
  o.tol = 1e-9;
  SolveResult r = minimize(small_ansatz(-1.0), o);
  REQUIRE(r.diag.rows.size() > 10);
  for (std::size_t k = 1; k < r.diag.rows.size(); ++k) CHECK(r.diag.rows[k].energy <= r.diag.rows[k - 1].energy);
  for (const auto& row : r.diag.rows) CHECK(row.nehari_defect < 1e-8);
  CHECK(r.energy <= r.diag.initial_energy + 1e-10);
  CHECK(check_pinwheel(r.state).pinwheel < 1e-14);
  for (const auto& f : r.state.u)
    for (double x : f.v) CHECK(x >= -1e-12);
}

TEST_CASE("steepest descent with a fixed step") {
  SolveOptions o;
  o.max_iters = 20;
  o.method = SolveOptions::Method::steepest;
  o.step = SolveOptions::StepRule::fixed;
  o.fixed_step = 0.2;
  SolveResult r = minimize(small_ansatz(-1.0), o);
  CHECK(r.diag.rows.size() == 21u);
  CHECK(r.energy < r.diag.initial_energy);
}

TEST_CASE("identical runs give identical diagnostics") {
  SolveOptions o;
  o.max_iters = 40;
  o.perturbation = 0.05;
  o.seed = 12;
  std::ostringstream a, b;
  minimize(small_ansatz(-1.0), o).diag.write_csv(a);
  minimize(small_ansatz(-1.0), o).diag.write_csv(b);
  CHECK(a.str() == b.str());
}

TEST_CASE("an unrecoverable start is reported") {
  Params p = analog(2, 2, 6, -2.0);
  Grid g = Grid::centered(2, 32, 8.0);
  SystemState s;
  s.params = p;
  s.u.assign(2, embed_radial(prof2(), {0, 0, 0}, g));
  CHECK_THROWS_AS(minimize(s, SolveOptions{}), InfeasibleProjection);
}

TEST_CASE("solver options and schedules are validated") {
  SolveOptions o;
  o.tol = 0;
  CHECK_THROWS_AS(o.validate(), ParameterError);
  o = SolveOptions{};
  o.armijo = 1.0;
  CHECK_THROWS_AS(o.validate(), ParameterError);
  ContinuationSchedule c;
  c.betas = {-1, -4, -2};
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c.betas = {-1, 0.5};
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c.betas = {-0.5, -0.1, -0.01};
  CHECK_NOTHROW(c.validate());
  c.betas = {};
  CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("overlap metrics on disjoint and identical states") {
  Grid g = Grid::centered(2, 32, 8.0);
  SystemState s;
  s.params = analog(2, 3, 6, -1.0);
  Field a(g), b(g);
  for (std::size_t k = 0; k < g.size(); ++k) (g.point(k)[0] < 0 ? a : b).v[k] = 1.0;
  s.u = {a, b, Field(g)};
  OverlapMetrics m = overlap_metrics(s);
  CHECK(m.total == 0.0);
  CHECK(m.support_intersection == 0.0);

  Field c = embed_radial(prof2(), {0, 0, 0}, g);
  s.u = {c, c, c};
  m = overlap_metrics(s);
  Discretization disc(s.params, g);
  CHECK(m.total == doctest::Approx(3 * disc.power_integral(c, 4.0)).epsilon(1e-13));
  CHECK(m.beta_times_total == doctest::Approx(-m.total));
}

TEST_CASE("partition of a quarter-turn symmetric state") {
  Grid g = Grid::centered(2, 40, 8.0);
  SystemState s;
  s.params = analog(2, 2, 2, -1.0);
  Field u0 = embed_radial(prof2(), {3, 0, 0}, g), tmp = embed_radial(prof2(), {-3, 0, 0}, g);
  for (std::size_t k = 0; k < g.size(); ++k) u0.v[k] += tmp.v[k];
  s.u = {u0, compose_rotation(u0, M_PI / 2)};
  PartitionResult p = extract_partition(s);
  CHECK(p.disjoint);
  CHECK(p.masks.size() == 2u);
  CHECK(p.mapping_residual[0] == 0.0);
  CHECK(p.measure[0] == doctest::Approx(p.measure[1]));
  CHECK(p.domain_energy[0] == doctest::Approx(p.domain_energy[1]).epsilon(0.02));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK_FALSE((p.masks[0][k] && p.masks[1][k]));

  SignChanging sc = sign_changing(s);
  CHECK(sc.antisymmetry < 1e-14);
  CHECK(sc.min < 0);
  CHECK(sc.max > 0);

  SystemState zero = s;
  for (auto& f : zero.u) f = Field(g);
  CHECK_THROWS_AS(extract_partition(zero), NumericalError);
  SystemState three = s;
  three.params.ell = 3;
  three.u.push_back(u0);
  CHECK_THROWS_AS(sign_changing(three), ParameterError);
}

TEST_CASE("drift diagnostic") {
  Grid g = Grid::centered(2, 48, 10.0);
  SystemState s;
  s.params = analog(2, 2, 6, -1.0);
  Field c = embed_radial(prof2(), {0, 0, 0}, g);
  s.u = {c, c};
  DriftReport d = drift_diagnostic(s);
  CHECK(d.center_norm < g.h[0]);
  CHECK_FALSE(d.flagged);
  Field e = embed_radial(prof2(), {8.5, 0, 0}, g);
  s.u = {e, e};
  CHECK(drift_diagnostic(s).flagged);
  CHECK(drift_diagnostic(small_ansatz(-1.0)).center_norm < 1e-12);
}

TEST_CASE("analog orbit centers") {
  Params p = analog(2, 2, 6, -1.0);
  auto c0 = analog_centers(p, 2.5, 0), c1 = analog_centers(p, 2.5, 1);
  REQUIRE(c0.size() == 6u);
  for (const auto& c : c0) CHECK(std::hypot(c[0], c[1]) == doctest::Approx(2.5));
  // u_1 = u_0 o rho puts its bumps at rho^{-1} of the u_0 bumps
  CHECK(c1[0][0] == doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
  CHECK(std::abs(c1[0][1]) == doctest::Approx(2.5));
}

TEST_CASE("minimal energies do not decrease along a warm-started schedule") {
  ContinuationSchedule sch;
  sch.betas = {-1, -3, -9};
  SolveOptions o;
  o.max_iters = 400;
  auto steps = continuation(small_ansatz(-1.0, 2), sch, o);
  REQUIRE(steps.size() == 3u);
  for (std::size_t k = 1; k < steps.size(); ++k) {
    CHECK(steps[k].result.energy >= steps[k - 1].result.energy - 1e-8);
    CHECK(steps[k].overlap.total < steps[k - 1].overlap.total);
  }
  std::ostringstream os;
  write_continuation_csv(os, steps);
  CHECK(os.str().find("beta,energy,overlap") == 0);
}
