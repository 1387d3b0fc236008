#include "pinwheel/groundstate.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "pinwheel/errors.hpp"
#include "pinwheel/numerics.hpp"

namespace pinwheel {

namespace ode = boost::numeric::odeint;
using OdeState = std::array<double, 2>;

namespace {

struct RadialOde {
  int d;
  double p, V;
  void operator()(const OdeState& y, OdeState& dy, double r) const {
    double nl = std::pow(std::abs(y[0]), 2 * p - 2) * y[0];
    dy[0] = y[1];
    dy[1] = -(d - 1) / r * y[1] + V * y[0] - nl;
  }
};

std::vector<double> radial_nodes(const RadialGridSpec& spec, double V, double r_max) {
  const double s = 1.0 / std::sqrt(V);
  std::vector<double> r{0.0};
  double h = spec.h_min * s;
  while (r.back() < r_max) {
    r.push_back(r.back() + h);
    h = std::min(h * spec.growth, spec.h_max * s);
  }
  return r;
}

// Series start at small r: w = a + c r^2/2 + e r^4/24.
OdeState series_start(int d, double p, double V, double a, double r) {
  double F = V * a - std::pow(a, 2 * p - 1);
  double dF = V - (2 * p - 1) * std::pow(a, 2 * p - 2);
  double c = F / d, e = 3.0 * dF * c / (d + 2);
  return {a + c * r * r / 2 + e * std::pow(r, 4) / 24, c * r + e * std::pow(r, 3) / 6};
}

struct Shot {
  int verdict = 0;  // +1 crossed zero (a too large), -1 turned up (a too small)
  std::vector<double> w, dw;
};

Shot shoot(const RadialOde& sys, double a, const std::vector<double>& r, bool keep) {
  auto stepper = ode::make_controlled(1e-16, 1e-13, ode::runge_kutta_dopri5<OdeState>());
  Shot s;
  OdeState y = series_start(sys.d, sys.p, sys.V, a, r[1]);
  if (keep) {
    s.w = {a, y[0]};
    s.dw = {0.0, y[1]};
  }
  double dt = r[1];
  for (std::size_t k = 1; k + 1 < r.size(); ++k) {
    ode::integrate_adaptive(stepper, sys, y, r[k], r[k + 1], std::min(dt, r[k + 1] - r[k]));
    if (keep) {
      s.w.push_back(y[0]);
      s.dw.push_back(y[1]);
    }
    if (y[0] < 0) { s.verdict = +1; return s; }
    if (y[1] > 0) { s.verdict = -1; return s; }
  }
  s.verdict = -1;
  return s;
}

double bessel_tail(int d, double V, double r) {
  double nu = 0.5 * (d - 2);
  return std::pow(r, -nu) * std::cyl_bessel_k(std::abs(nu), std::sqrt(V) * r);
}

double bessel_tail_deriv(int d, double V, double r) {
  double nu = 0.5 * (d - 2);
  return -std::sqrt(V) * std::pow(r, -nu) * std::cyl_bessel_k(std::abs(nu + 1), std::sqrt(V) * r);
}

// Inward integration of the full ODE from r.back() to r[K] with linear-tail data.
std::pair<std::vector<double>, std::vector<double>> inward_tail(const RadialOde& sys,
                                                                const std::vector<double>& r,
                                                                std::size_t K, double A) {
  auto stepper = ode::make_controlled(1e-300, 1e-13, ode::runge_kutta_dopri5<OdeState>());
  const std::size_t n = r.size();
  std::vector<double> w(n - K), dw(n - K);
  OdeState y{A * bessel_tail(sys.d, sys.V, r.back()), A * bessel_tail_deriv(sys.d, sys.V, r.back())};
  w.back() = y[0];
  dw.back() = y[1];
  for (std::size_t k = n - 1; k > K; --k) {
    double h = r[k - 1] - r[k];
    ode::integrate_adaptive(stepper, sys, y, r[k], r[k - 1], h);
    w[k - 1 - K] = y[0];
    dw[k - 1 - K] = y[1];
  }
  return {w, dw};
}

std::size_t locate(const std::vector<double>& r, double x) {
  auto it = std::upper_bound(r.begin(), r.end(), x);
  std::size_t k = std::size_t(it - r.begin());
  return k == 0 ? 0 : std::min(k - 1, r.size() - 2);
}

// Fritsch-Carlson limited Hermite slopes for interval k.
void limited_slopes(const RadialProfile& P, std::size_t k, double& m0, double& m1) {
  double h = P.r[k + 1] - P.r[k];
  double delta = (P.w[k + 1] - P.w[k]) / h;
  m0 = P.dw[k];
  m1 = P.dw[k + 1];
  if (delta == 0) { m0 = m1 = 0; return; }
  double al = m0 / delta, be = m1 / delta;
  if (al < 0) { m0 = 0; al = 0; }
  if (be < 0) { m1 = 0; be = 0; }
  double s = al * al + be * be;
  if (s > 9) {
    double t = 3 / std::sqrt(s);
    m0 = t * al * delta;
    m1 = t * be * delta;
  }
}

}  // namespace

double RadialProfile::eval(double rr) const {
  rr = std::abs(rr);
  if (rr >= r.back()) {
    if (fit.a_N > 0)
      return fit.a_N * std::pow(rr, -0.5 * (d - 1)) * std::exp(-std::sqrt(V_inf) * rr);
    return 0.0;
  }
  std::size_t k = locate(r, rr);
  double h = r[k + 1] - r[k], t = (rr - r[k]) / h;
  double m0, m1;
  limited_slopes(*this, k, m0, m1);
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * w[k] + (t3 - 2 * t2 + t) * h * m0 +
         (-2 * t3 + 3 * t2) * w[k + 1] + (t3 - t2) * h * m1;
}

double RadialProfile::deriv(double rr) const {
  rr = std::abs(rr);
  if (rr >= r.back()) {
    if (fit.a_N <= 0) return 0.0;
    double sv = std::sqrt(V_inf), q = 0.5 * (d - 1);
    return -fit.a_N * std::pow(rr, -q) * std::exp(-sv * rr) * (sv + q / rr);
  }
  std::size_t k = locate(r, rr);
  double h = r[k + 1] - r[k], t = (rr - r[k]) / h;
  double m0, m1;
  limited_slopes(*this, k, m0, m1);
  double t2 = t * t;
  return ((6 * t2 - 6 * t) * w[k] + (3 * t2 - 4 * t + 1) * h * m0 +
          (-6 * t2 + 6 * t) * w[k + 1] + (3 * t2 - 2 * t) * h * m1) / h;
}

double RadialProfile::integrate(const std::function<double(double, double, double)>& f) const {
  std::vector<double> g(r.size());
  for (std::size_t k = 0; k < r.size(); ++k)
    g[k] = f(r[k], w[k], dw[k]) * (d == 1 ? 1.0 : std::pow(r[k], d - 1));
  return sphere_area(d) * integrate_samples(r, g);
}

RadialProfile solve_ground_state(int d, double p, double V_inf, const RadialGridSpec& spec) {
  if (d < 1) throw ParameterError("dimension must be >= 1");
  if (!(p > 1)) throw ParameterError("p must exceed 1");
  if (d >= 3 && !(p < double(d) / (d - 2)))
    throw ParameterError("supercritical exponent: need p < d/(d-2)");
  if (!(V_inf > 0)) throw ParameterError("V_inf must be positive");
  if (!(spec.h_min > 0 && spec.h_max >= spec.h_min && spec.growth >= 1))
    throw ParameterError("invalid radial grid spec");

  const RadialOde sys{d, p, V_inf};
  const double s = 1.0 / std::sqrt(V_inf);
  double r_max = spec.r_max > 0 ? spec.r_max : 36.0 * s;
  std::vector<double> r = radial_nodes(spec, V_inf, r_max);

  double lo = std::pow(V_inf, 1.0 / (2 * p - 2)), hi = 2 * lo;
  for (int k = 0; shoot(sys, hi, r, false).verdict < 0; ++k) {
    if (k > 60) throw NumericalError("ground state: no overshooting amplitude found");
    lo = hi;
    hi *= 2;
  }
  int iters = 0;
  while (true) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (shoot(sys, mid, r, false).verdict > 0 ? hi : lo) = mid;
    if (++iters > 400) break;
  }
  if (hi - lo > 1e-12 * hi) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "ground state bisection stalled: bracket [%.17g, %.17g]", lo, hi);
    throw NumericalError(buf);
  }

  Shot sl = shoot(sys, lo, r, true), sh = shoot(sys, hi, r, true);
  const std::size_t valid = std::min(sl.w.size(), sh.w.size());
  std::size_t K = 1;
  for (std::size_t k = 1; k < valid; ++k) {
    double mid = 0.5 * (sl.w[k] + sh.w[k]);
    double dmid = 0.5 * (sl.dw[k] + sh.dw[k]);
    if (!(mid > 0 && dmid < 0) || std::abs(sl.w[k] - sh.w[k]) > 1e-12 * mid) break;
    K = k;
  }
  if (K < 10) throw NumericalError("ground state: shooting bracket too wide to match a tail");

  RadialProfile P;
  P.d = d;
  P.p = p;
  P.V_inf = V_inf;
  P.r = r;
  P.bracket_lo = lo;
  P.bracket_hi = hi;
  P.r_match = r[K];
  P.w.resize(r.size());
  P.dw.resize(r.size());
  for (std::size_t k = 0; k <= K; ++k) {
    P.w[k] = 0.5 * (sl.w[k] + sh.w[k]);
    P.dw[k] = 0.5 * (sl.dw[k] + sh.dw[k]);
  }

  // Secant on the tail amplitude so the inward solution meets the shot at r[K].
  const double target = P.w[K];
  double A0 = target / bessel_tail(d, V_inf, r[K]);
  auto mismatch = [&](double A) { return inward_tail(sys, r, K, A).first.front() - target; };
  double f0 = mismatch(A0), A1 = A0 * (1 + 1e-3), f1 = mismatch(A1);
  for (int it = 0; it < 50 && std::abs(f1) > 1e-15 * target && f1 != f0; ++it) {
    double A2 = A1 - f1 * (A1 - A0) / (f1 - f0);
    A0 = A1; f0 = f1;
    A1 = A2; f1 = mismatch(A1);
  }
  auto [tw, tdw] = inward_tail(sys, r, K, A1);
  P.match_slope_error = std::abs(tdw.front() - P.dw[K]) / std::abs(P.dw[K]);
  for (std::size_t k = K + 1; k < r.size(); ++k) {
    P.w[k] = tw[k - K];
    P.dw[k] = tdw[k - K];
  }
  for (std::size_t k = 1; k < r.size(); ++k)
    if (!(P.w[k] > 0 && P.w[k] < P.w[k - 1]))
      throw NumericalError("ground state profile is not positive and decreasing");
  if (P.w.back() >= 1e-10 * P.w.front())
    throw NumericalError("ground state: radial domain too short for the tail");
  P.fit = fit_decay(P);
  return P;
}

double norm_V2(const RadialProfile& P) {
  return P.integrate([&](double, double w, double dw) { return dw * dw + P.V_inf * w * w; });
}

double norm_2p(const RadialProfile& P) {
  return P.integrate([&](double, double w, double) { return std::pow(w, 2 * P.p); });
}

double ground_energy(const RadialProfile& P) {
  return (P.p - 1) / (2 * P.p) * norm_V2(P);
}

DecayFit fit_decay(const RadialProfile& P) {
  const double sv = std::sqrt(P.V_inf), q = 0.5 * (P.d - 1), w0 = P.w.front();
  std::vector<double> xs, inv, qv, qd, logw;
  DecayFit F;
  for (std::size_t k = 1; k < P.r.size(); ++k) {
    double rr = P.r[k];
    bool small = P.w[k] <= 1e-3 * w0 && std::pow(P.w[k], 2 * P.p - 2) <= 1e-3 * P.V_inf;
    if (!small || P.w[k] < 1e-11 * w0) continue;
    xs.push_back(rr);
    inv.push_back(1.0 / rr);
    double g = std::pow(rr, q) * std::exp(sv * rr);
    qv.push_back(P.w[k] * g);
    qd.push_back(std::abs(P.dw[k]) * g);
    logw.push_back(std::log(P.w[k] * std::pow(rr, q)));
  }
  if (xs.size() < 20) throw NumericalError("decay fit: window too short");
  F.r_lo = xs.front();
  F.r_hi = xs.back();
  F.exponent = -fit_line(xs, logw).slope;
  F.a_N = fit_line(inv, qv).intercept;
  F.b_N = fit_line(inv, qd).intercept;
  auto [mn, mx] = std::minmax_element(qv.begin(), qv.end());
  F.residual = (*mx - *mn) / F.a_N;
  if (!(F.a_N > 0) || F.residual > 0.10)
    throw NumericalError("decay fit: plateau residual exceeds 10%");
  F.C1 = std::numeric_limits<double>::infinity();
  F.C2 = 0;
  for (std::size_t k = 1; k < P.r.size(); ++k) {
    double rr = P.r[k];
    double g = std::min(1.0, std::pow(rr, -q)) * std::exp(-sv * rr);
    F.C1 = std::min(F.C1, P.w[k] / g);
    F.C2 = std::max(F.C2, P.w[k] / g);
  }
  return F;
}

double ode_residual(const RadialProfile& P) {
  const std::size_t n = P.r.size();
  double worst = 0;
  for (std::size_t k = 2; k + 2 < n; ++k) {
    double rr = P.r[k];
    if (rr < P.fit.r_lo || rr > P.fit.r_hi) continue;
    std::span<const double> nodes(&P.r[k - 2], 5);
    auto wts = fornberg_weights(rr, nodes, 1);
    double w2 = 0;
    for (int j = 0; j < 5; ++j) w2 += wts[j] * P.dw[k - 2 + j];
    double res = w2 + (P.d - 1) / rr * P.dw[k] - P.V_inf * P.w[k] + std::pow(P.w[k], 2 * P.p - 1);
    worst = std::max(worst, std::abs(res) / (P.V_inf * P.w[k]));
  }
  return worst;
}

Field embed_radial(const RadialProfile& P, std::array<double, 3> c, const Grid& g) {
  if (P.d != g.d) throw ParameterError("embed_radial: profile and grid dimensions differ");
  Field f(g);
  double support = P.r.back();
  for (std::size_t k = 1; k < P.r.size(); ++k)
    if (P.w[k] < 1e-8 * P.w.front()) { support = P.r[k]; break; }
  for (int a = 0; a < g.d; ++a) {
    double L = g.half_width(a);
    if (std::abs(c[a]) > L)
      f.warnings.push_back("center outside grid: embedded profile is truncated");
    else if (std::abs(c[a]) + support > L)
      f.warnings.push_back("grid does not cover center +- support radius");
  }
  for (std::size_t k = 0; k < f.size(); ++k) {
    auto x = g.point(k);
    double r2 = 0;
    for (int a = 0; a < g.d; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
    f.v[k] = P.eval(std::sqrt(r2));
  }
  return f;
}

void write_profile(std::ostream& os, const RadialProfile& P) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "# d=%d p=%.17g V_inf=%.17g a_N=%.17g exponent=%.17g\n", P.d, P.p,
                P.V_inf, P.fit.a_N, P.fit.exponent);
  os << buf;
  for (std::size_t k = 0; k < P.r.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", P.r[k], P.w[k]);
    os << buf;
  }
}

}  // namespace pinwheel
