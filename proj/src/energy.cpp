#include "pinwheel/energy.hpp"

#include <cmath>

#include "pinwheel/errors.hpp"
#include "pinwheel/numerics.hpp"

namespace pinwheel {

namespace {

// |u|^{q-2} u, extended by 0 at u = 0.
inline double signed_pow(double u, double q) {
  if (u == 0) return 0.0;
  return std::pow(std::abs(u), q - 2) * u;
}

std::array<std::size_t, 3> strides(const Grid& g) {
  return {std::size_t(g.n[1]) * g.n[2], std::size_t(g.n[2]), 1};
}

std::array<int, 3> index3(const Grid& g, std::size_t k) {
  int k2 = int(k % g.n[2]);
  std::size_t rest = k / g.n[2];
  return {int(rest / g.n[1]), int(rest % g.n[1]), k2};
}

}  // namespace

double StateTerms::sum_A() const {
  return pairwise_sum(A);
}

double StateTerms::denominator(double beta) const {
  double s = pairwise_sum(P), c = 0;
  for (std::size_t i = 0; i < C.size(); ++i)
    for (std::size_t j = 0; j < C.size(); ++j)
      if (i != j) c += C[i][j];
  return s + beta * c;
}

double StateTerms::component_denominator(int i, double beta) const {
  double c = 0;
  for (std::size_t j = 0; j < C.size(); ++j)
    if (int(j) != i) c += C[i][j];
  return P[i] + beta * c;
}

Discretization::Discretization(const Params& params, const Grid& grid)
    : params_(params), grid_(grid), V_(sample_potential(params.pot, grid)),
      iso_(isotropic_stencil(params, grid)) {}

bool isotropic_stencil(const Params& params, const Grid& grid) {
  return params.stencil == Stencil::isotropic && grid.d >= 2 && grid.square();
}

double Discretization::inner_V(const Field& u, const Field& v) const {
  const Grid& g = grid_;
  const auto st = strides(g);
  std::array<double, 3> w{};
  for (int a = 0; a < g.d; ++a) w[a] = 1.0 / (g.h[a] * g.h[a]);
  const double wd = iso_ ? w[0] / 6.0 : 0.0;
  if (iso_) w[0] = w[1] = w[0] * (2.0 / 3.0);
  auto node = [&](std::size_t k) {
    auto idx = index3(g, k);
    double s = V_[k] * u.v[k] * v.v[k];
    for (int a = 0; a < g.d; ++a) {
      double un = 0, vn = 0;
      if (idx[a] + 1 < g.n[a]) { un = u.v[k + st[a]]; vn = v.v[k + st[a]]; }
      s += (un - u.v[k]) * (vn - v.v[k]) * w[a];
      if (idx[a] == 0) s += u.v[k] * v.v[k] * w[a];
    }
    if (iso_) {
      for (int di : {-1, 1})
        for (int dj : {-1, 1}) {
          int i = idx[0] + di, j = idx[1] + dj;
          bool inside = i >= 0 && i < g.n[0] && j >= 0 && j < g.n[1];
          if (inside && di < 0) continue;
          double un = 0, vn = 0;
          if (inside) {
            std::size_t nb = k + (di > 0 ? st[0] : -st[0]) + (dj > 0 ? st[1] : -st[1]);
            un = u.v[nb];
            vn = v.v[nb];
          }
          s += (un - u.v[k]) * (vn - v.v[k]) * wd;
        }
    }
    return s;
  };
  return g.cell_volume() * pairwise_sum_fn(0, u.size(), node);
}

double Discretization::power_integral(const Field& u, double q) const {
  return grid_.cell_volume() *
         pairwise_sum_fn(0, u.size(), [&](std::size_t k) { return std::pow(std::abs(u.v[k]), q); });
}

double Discretization::cross_integral(const Field& u, const Field& v, double q) const {
  return grid_.cell_volume() * pairwise_sum_fn(0, u.size(), [&](std::size_t k) {
           return std::pow(std::abs(u.v[k] * v.v[k]), q);
         });
}

Field Discretization::neg_laplacian(const Field& u) const {
  const Grid& g = grid_;
  const auto st = strides(g);
  std::array<double, 3> w{};
  for (int a = 0; a < g.d; ++a) w[a] = 1.0 / (g.h[a] * g.h[a]);
  const double wd = iso_ ? w[0] / 6.0 : 0.0;
  if (iso_) w[0] = w[1] = w[0] * (2.0 / 3.0);
  Field out(g);
  for (std::size_t k = 0; k < u.size(); ++k) {
    auto idx = index3(g, k);
    double s = 0;
    for (int a = 0; a < g.d; ++a) {
      double lo = idx[a] > 0 ? u.v[k - st[a]] : 0.0;
      double hi = idx[a] + 1 < g.n[a] ? u.v[k + st[a]] : 0.0;
      s += (2 * u.v[k] - lo - hi) * w[a];
    }
    if (iso_) {
      for (int di : {-1, 1})
        for (int dj : {-1, 1}) {
          int i = idx[0] + di, j = idx[1] + dj;
          bool inside = i >= 0 && i < g.n[0] && j >= 0 && j < g.n[1];
          double un = inside ? u.v[k + (di > 0 ? st[0] : -st[0]) + (dj > 0 ? st[1] : -st[1])] : 0.0;
          s += (u.v[k] - un) * wd;
        }
    }
    out.v[k] = s;
  }
  return out;
}

StateTerms Discretization::terms(const SystemState& s) const {
  const int ell = s.ell();
  const double p = params_.p;
  StateTerms t;
  t.A.resize(ell);
  t.P.resize(ell);
  t.C.assign(ell, std::vector<double>(ell, 0.0));
  for (int i = 0; i < ell; ++i) {
    t.A[i] = inner_V(s.u[i], s.u[i]);
    t.P[i] = power_integral(s.u[i], 2 * p);
  }
  for (int i = 0; i < ell; ++i)
    for (int j = i + 1; j < ell; ++j) t.C[i][j] = t.C[j][i] = cross_integral(s.u[i], s.u[j], p);
  return t;
}

double Discretization::energy(const SystemState& s) const {
  const double p = params_.p, beta = params_.beta;
  StateTerms t = terms(s);
  double cross = 0;
  for (int i = 0; i < s.ell(); ++i)
    for (int j = 0; j < s.ell(); ++j)
      if (i != j) cross += t.C[i][j];
  return 0.5 * t.sum_A() - pairwise_sum(t.P) / (2 * p) - beta * cross / (2 * p);
}

std::vector<Field> Discretization::gradient(const SystemState& s) const {
  const int ell = s.ell();
  const double p = params_.p, beta = params_.beta;
  std::vector<Field> g;
  g.reserve(ell);
  std::vector<std::vector<double>> up(ell);
  for (int j = 0; j < ell; ++j) {
    up[j].resize(s.u[j].size());
    for (std::size_t k = 0; k < up[j].size(); ++k) up[j][k] = std::pow(std::abs(s.u[j].v[k]), p);
  }
  for (int i = 0; i < ell; ++i) {
    Field gi = neg_laplacian(s.u[i]);
    const auto& u = s.u[i].v;
    for (std::size_t k = 0; k < u.size(); ++k) {
      double coupling = 0;
      for (int j = 0; j < ell; ++j)
        if (j != i) coupling += up[j][k];
      gi.v[k] += V_[k] * u[k] - signed_pow(u[k], 2 * p) - beta * coupling * signed_pow(u[k], p);
    }
    g.push_back(std::move(gi));
  }
  return g;
}

double inner_V(const Field& u, const Field& v, const PotentialSpec& pot) {
  Params p;
  p.d = u.grid.d;
  p.pot = pot;
  return Discretization(p, u.grid).inner_V(u, v);
}

double system_energy(const SystemState& s) {
  s.validate();
  return Discretization(s.params, s.grid()).energy(s);
}

std::vector<Field> system_gradient(const SystemState& s) {
  s.validate();
  return Discretization(s.params, s.grid()).gradient(s);
}

void check_feasible(const StateTerms& t, double beta) {
  for (std::size_t i = 0; i < t.P.size(); ++i)
    if (!(t.component_denominator(int(i), beta) > 0))
      throw InfeasibleProjection(
          "Nehari projection infeasible: component " + std::to_string(i) +
              " has |u|_2p^2p + beta*sum C <= 0",
          int(i));
}

double nehari_scalar(const StateTerms& t, double beta, double p) {
  check_feasible(t, beta);
  return std::pow(t.sum_A() / t.denominator(beta), 1.0 / (2 * p - 2));
}

double nehari_energy(const StateTerms& t, double beta, double p) {
  check_feasible(t, beta);
  double ratio = t.sum_A() / std::pow(t.denominator(beta), 1.0 / p);
  return (p - 1) / (2 * p) * std::pow(ratio, p / (p - 1));
}

double nehari_scalar(const SystemState& s) {
  s.validate();
  Discretization disc(s.params, s.grid());
  return nehari_scalar(disc.terms(s), s.params.beta, s.params.p);
}

double nehari_energy(const SystemState& s) {
  s.validate();
  Discretization disc(s.params, s.grid());
  return nehari_energy(disc.terms(s), s.params.beta, s.params.p);
}

ResidualReport residual(const Discretization& disc, const SystemState& s) {
  auto g = disc.gradient(s);
  ResidualReport r;
  for (int i = 0; i < s.ell(); ++i) {
    double a = disc.inner_V(s.u[i], s.u[i]);
    if (a <= 0) {
      r.per_component.push_back(0.0);
      r.degenerate = true;
      continue;
    }
    r.per_component.push_back(l2_norm(g[i]) / std::sqrt(a));
  }
  return r;
}

ResidualReport residual(const SystemState& s) {
  s.validate();
  return residual(Discretization(s.params, s.grid()), s);
}

namespace {
SystemState single_state(const Field& u, const PotentialSpec& pot, double p) {
  SystemState s;
  s.u = {u};
  s.params.d = u.grid.d;
  s.params.ell = 1;
  s.params.p = p;
  s.params.beta = 0;
  s.params.pot = pot;
  return s;
}
}  // namespace

double single_energy(const Field& u, const PotentialSpec& pot, double p) {
  return system_energy(single_state(u, pot, p));
}

double single_nehari_scalar(const Field& u, const PotentialSpec& pot, double p) {
  return nehari_scalar(single_state(u, pot, p));
}

double single_nehari(const Field& u, const PotentialSpec& pot, double p) {
  return nehari_energy(single_state(u, pot, p));
}

bool all_nontrivial(const StateTerms& t) {
  double mx = 0;
  for (double a : t.A) mx = std::max(mx, a);
  if (mx <= 0) return false;
  for (double a : t.A)
    if (!(std::sqrt(a) > 1e-8 * std::sqrt(mx))) return false;
  return true;
}

}  // namespace pinwheel
