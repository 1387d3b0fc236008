#include <doctest.h>

#include <cmath>
#include <random>

#include "pinwheel/energy.hpp"
#include "pinwheel/errors.hpp"

using namespace pinwheel;

namespace {

SystemState random_state(const Grid& g, const Params& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.2, 1.0);
  SystemState s;
  s.params = p;
  for (int i = 0; i < p.ell; ++i) {
    Field f(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      auto x = g.point(k);
      f.v[k] = ud(rng) * std::exp(-0.3 * (x[0] * x[0] + x[1] * x[1]));
    }
    s.u.push_back(std::move(f));
  }
  return s;
}

Params params(double p, double beta, Stencil st) {
  Params pr;
  pr.d = 2;
  pr.p = p;
  pr.beta = beta;
  pr.ell = 3;
  pr.m = 6;
  pr.stencil = st;
  pr.pot.kind = PotentialSpec::Kind::exp_tail;
  pr.pot.A = -0.4;
  pr.pot.kappa = 0.7;
  return pr;
}

}  // namespace

TEST_CASE("gradient matches central differences") {
  Grid g = Grid::centered(2, 10, 4.0);
  for (auto st : {Stencil::standard, Stencil::isotropic})
    for (double p : {1.5, 2.0, 3.0}) {
      Params pr = params(p, -0.7, st);
      SystemState s = random_state(g, pr, 11);
      Discretization disc(pr, g);
      auto grad = disc.gradient(s);
      const double eps = 1e-5;
      for (int i = 0; i < pr.ell; ++i)
        for (std::size_t k : {0ul, 17ul, 45ul, 99ul}) {
          SystemState a = s, b = s;
          a.u[i].v[k] += eps;
          b.u[i].v[k] -= eps;
          double fd = (disc.energy(a) - disc.energy(b)) / (2 * eps);
          double an = grad[i].v[k] * g.cell_volume();
          CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
        }
    }
}

TEST_CASE("inner_V is symmetric and matches the energy quadratic part") {
  Grid g = Grid::centered(2, 12, 4.0);
  Params pr = params(2.0, -1.0, Stencil::isotropic);
  SystemState s = random_state(g, pr, 2);
  Discretization disc(pr, g);
  CHECK(disc.inner_V(s.u[0], s.u[1]) == doctest::Approx(disc.inner_V(s.u[1], s.u[0])).epsilon(1e-14));
  CHECK(disc.inner_V(s.u[0], s.u[0]) == doctest::Approx(disc.terms(s).A[0]).epsilon(1e-14));
  // <-Delta u + V u, u> equals |u|_V^2
  Field lap = disc.neg_laplacian(s.u[0]);
  double q = l2_dot(lap, s.u[0]);
  for (std::size_t k = 0; k < g.size(); ++k) q += disc.V()[k] * s.u[0].v[k] * s.u[0].v[k] * g.cell_volume();
  CHECK(q == doctest::Approx(disc.terms(s).A[0]).epsilon(1e-12));
}

TEST_CASE("Laplacian stencils are exact on quadratics away from the wall") {
  Grid g = Grid::centered(2, 15, 4.0);
  for (auto st : {Stencil::standard, Stencil::isotropic}) {
    Params pr = params(2.0, -1.0, st);
    Discretization disc(pr, g);
    Field q(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      auto x = g.point(k);
      q.v[k] = x[0] * x[0] + 3 * x[1] * x[1] + x[0] * x[1];
    }
    Field l = disc.neg_laplacian(q);
    for (int i = 1; i < 14; ++i)
      for (int j = 1; j < 14; ++j) CHECK(l.v[std::size_t(i) * 15 + j] == doctest::Approx(-8.0).epsilon(1e-11));
  }
}

TEST_CASE("Helmholtz solver inverts the discrete operator") {
  Grid g = Grid::centered(2, 24, 5.0);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (bool iso : {false, true}) {
    Params pr = params(2.0, -1.0, iso ? Stencil::isotropic : Stencil::standard);
    pr.pot.kind = PotentialSpec::Kind::none;
    Discretization disc(pr, g);
    REQUIRE(disc.isotropic() == iso);
    HelmholtzSolver K(g, 1.0, iso);
    Field u(g);
    for (double& x : u.v) x = nd(rng);
    Field f = disc.neg_laplacian(u);
    for (std::size_t k = 0; k < g.size(); ++k) f.v[k] += u.v[k];
    Field back = K.apply(f);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(back.v[k] == doctest::Approx(u.v[k]).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("Nehari scaling and the closed-form energy") {
  Grid g = Grid::centered(2, 12, 4.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Params pr = params(seed % 2 ? 1.7 : 2.0, -0.3, Stencil::isotropic);
    SystemState s = random_state(g, pr, seed);
    Discretization disc(pr, g);
    StateTerms t = disc.terms(s);
    const double su = nehari_scalar(t, pr.beta, pr.p);
    SystemState r = s;
    for (auto& f : r.u)
      for (double& x : f.v) x *= su;
    StateTerms tr = disc.terms(r);
    CHECK(std::abs(tr.sum_A() - tr.denominator(pr.beta)) < 1e-12 * tr.sum_A());
    CHECK(nehari_energy(t, pr.beta, pr.p) == doctest::Approx(disc.energy(r)).epsilon(1e-12));
    // the Nehari point maximizes the energy along the ray
    CHECK(disc.energy(r) >= nehari_energy(t, pr.beta, pr.p) - 1e-12);
    for (double c : {0.9, 1.1}) {
      SystemState q = r;
      for (auto& f : q.u)
        for (double& x : f.v) x *= c;
      CHECK(disc.energy(q) < disc.energy(r));
    }
  }
}

TEST_CASE("infeasible states are reported by component") {
  Grid g = Grid::centered(2, 10, 4.0);
  Params pr = params(2.0, -5.0, Stencil::isotropic);
  pr.ell = 2;
  SystemState s = random_state(g, pr, 1);
  s.u[1] = s.u[0];
  Discretization disc(pr, g);
  try {
    nehari_scalar(disc.terms(s), pr.beta, pr.p);
    FAIL("expected an infeasible projection");
  } catch (const InfeasibleProjection& e) {
    CHECK(e.component == 0);
  }
}

TEST_CASE("single-equation Nehari quantities") {
  Grid g = Grid::centered(2, 12, 4.0);
  Params pr = params(2.0, 0.0, Stencil::standard);
  SystemState s = random_state(g, pr, 4);
  const double su = single_nehari_scalar(s.u[0], pr.pot, pr.p);
  Field r = s.u[0];
  for (double& x : r.v) x *= su;
  CHECK(single_nehari(r, pr.pot, pr.p) == doctest::Approx(single_energy(r, pr.pot, pr.p)).epsilon(1e-12));
}
