#include "pinwheel/ansatz.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <map>

#include "pinwheel/errors.hpp"
#include "pinwheel/groups.hpp"
#include "pinwheel/numerics.hpp"

namespace pinwheel {

namespace {

double radial_weight(int d, double r) { return sphere_area(d) * (d == 1 ? 1.0 : std::pow(r, d - 1)); }

// Gauss-Legendre sum of f over [a, b] split into n panels.
template <class F>
double gl_panels(double a, double b, int n, F&& f) {
  using GL = boost::math::quadrature::gauss<double, 12>;
  double total = 0;
  for (int k = 0; k < n; ++k) {
    double lo = a + (b - a) * k / n, hi = a + (b - a) * (k + 1) / n;
    total += GL::integrate(f, lo, hi);
  }
  return total;
}

double prefactor(int d, double R, double rate) {
  return std::pow(R, 0.5 * (d - 1)) * std::exp(rate * R);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

double bound_value(double p, double num, double den) {
  return (p - 1) / (2 * p) * std::pow(num / std::pow(den, 1.0 / p), p / (p - 1));
}

// log|y| = c - k s + alpha log s.
double fit_rate_with_power(const std::vector<double>& s, const std::vector<double>& y) {
  Eigen::MatrixXd X(s.size(), 3);
  Eigen::VectorXd b(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    X(k, 0) = 1.0;
    X(k, 1) = -s[k];
    X(k, 2) = std::log(s[k]);
    b(k) = std::log(std::abs(y[k]));
  }
  Eigen::VectorXd coef = X.colPivHouseholderQr().solve(b);
  return coef(1);
}

}  // namespace

CutoffSpec CutoffSpec::midpoint(int m, int ell) {
  auto sc = separation_constants(m, ell);
  if (!sc.strong_ok)
    throw ParameterError("cutoff needs 2 sin(pi/m) < sin(pi/2l); fails for m=" + std::to_string(m) +
                         ", l=" + std::to_string(ell));
  CutoffSpec c;
  c.delta = 0.5 * (2 * sc.intra + sc.inter);
  c.epsilon = 0.5 * (sc.inter - c.delta) / (sc.inter + c.delta);
  c.r = (sc.inter + c.delta) / 4;
  return c;
}

void CutoffSpec::validate(int m, int ell) const {
  auto sc = separation_constants(m, ell);
  if (!(sc.intra < delta / 2 && delta / 2 < r && r < sc.inter / 2))
    throw ParameterError("cutoff radii violate 2 sin(pi/m) < delta/2 < r < sin(pi/2l)");
  if (!(epsilon > 0 && epsilon < (sc.inter - delta) / (sc.inter + delta)))
    throw ParameterError("cutoff shoulder epsilon outside its admissible window");
}

double CutoffProfile::chi(double r) const {
  r = std::abs(r);
  double a = (1 - eps) * s;
  if (r <= a) return 1.0;
  if (r >= s) return 0.0;
  double c = std::cos(0.5 * kPi * (r - a) / (eps * s));
  return c * c;
}

double CutoffProfile::dchi(double r) const {
  r = std::abs(r);
  double a = (1 - eps) * s;
  if (r <= a || r >= s) return 0.0;
  return -0.5 * kPi / (eps * s) * std::sin(kPi * (r - a) / (eps * s));
}

CutoffProfile cutoff_profile(const RadialProfile& prof, double s, double eps) {
  if (!(eps > 0 && eps < 1)) throw ParameterError("cutoff shoulder must lie in (0,1)");
  if (!(s > 0)) throw ParameterError("cutoff radius must be positive");
  return CutoffProfile{&prof, s, eps};
}

CylOptions cyl_options_for(const RadialProfile& prof) {
  CylOptions o;
  const double sc = 1.0 / std::sqrt(prof.V_inf);
  o.panel = sc;
  o.extent = prof.r_last();
  return o;
}

double pair_interaction(double a, double b, double sep, const RadialProfile& prof,
                        std::vector<std::string>* warnings) {
  if (a < 1 || b < 1) throw ParameterError("pair_interaction needs exponents >= 1");
  if (sep < 0) throw ParameterError("separation must be nonnegative");
  if (warnings && sep > 2 * prof.r_last() + 1.0)
    warnings->push_back("separation beyond resolved profile: tail extrapolation only");
  CylOptions opt = cyl_options_for(prof);
  CylRule rule = make_cyl_rule(prof.d, sep, opt);
  return cyl_integrate(rule, sep, [&](double, double, double r1, double r2) {
    return std::pow(prof.eval(r1), a) * std::pow(prof.eval(r2), b);
  });
}

std::vector<DistanceClass> intra_orbit_distances(int m) {
  if (m <= 0 || m % 2) throw ParameterError("m must be a positive even integer");
  std::vector<DistanceClass> out;
  for (int q = 1; q <= m / 2; ++q)
    out.push_back({2.0 * std::sin(kPi * q / m), q == m / 2 ? m : 2 * m});
  return out;
}

std::vector<DistanceClass> inter_orbit_distances(int m, int ell) {
  GroupSpec spec;
  spec.m = m;
  spec.ell = ell;
  spec.mode = GroupMode::paper;
  spec.dim = 4;
  Eigen::VectorXd base = Eigen::VectorXd::Zero(4);
  base(0) = 1.0;
  OrbitSet o = orbit_points(base, spec);
  std::map<long long, DistanceClass> classes;
  for (std::size_t a = 0; a < o.points.size(); ++a)
    for (std::size_t b = 0; b < o.points.size(); ++b) {
      if (o.labels[a].first == o.labels[b].first) continue;
      double dist = (o.points[a] - o.points[b]).norm();
      long long key = std::llround(dist * 1e9);
      auto& c = classes[key];
      c.dist = dist;
      c.count += 1;
    }
  std::vector<DistanceClass> out;
  for (auto& [k, c] : classes) out.push_back(c);
  return out;
}

double epsilon_R(const RadialProfile& prof, int m, double R) {
  const double p = prof.p;
  double eps = 0;
  for (const auto& c : intra_orbit_distances(m))
    eps += c.count * pair_interaction(2 * p - 1, 1, R * c.dist, prof);
  return eps;
}

RateFit fit_rate(std::span<const double> R, std::span<const double> y, int d) {
  const std::size_t n = R.size(), h = n / 2;
  std::vector<double> x, ly;
  for (std::size_t k = h; k < n; ++k) {
    x.push_back(R[k]);
    ly.push_back(std::log(y[k] * std::pow(R[k], 0.5 * (d - 1))));
  }
  LinearFit f = fit_line(x, ly);
  RateFit r;
  r.exponent = -f.slope;
  std::vector<double> q;
  for (std::size_t k = h; k < n; ++k) q.push_back(y[k] * prefactor(d, R[k], r.exponent));
  auto [mn, mx] = std::minmax_element(q.begin(), q.end());
  r.amplitude = std::exp(f.intercept);
  r.plateau_variation = (*mx - *mn) / r.amplitude;
  return r;
}

AsymptoticsReport verify_interaction_asymptotics(const RadialProfile& prof,
                                                 const std::vector<double>& R_grid, int m,
                                                 double amplitude) {
  if (R_grid.size() < 4) throw ParameterError("R grid needs at least 4 points");
  const int d = prof.d;
  const double p = prof.p, sv = std::sqrt(prof.V_inf), kappa = 1.5 * 2.0 * std::sin(kPi / m);
  AsymptoticsReport rep;
  rep.R = R_grid;
  rep.kappa = kappa;
  const CylOptions opt = cyl_options_for(prof);
  for (double R : R_grid) {
    CylRule rule = make_cyl_rule(d, R, opt);
    double ilinear = 0, ipower = 0, ipotential = 0;
    ilinear = cyl_integrate(rule, R, [&](double, double, double r1, double r2) {
      return std::pow(prof.eval(r1), 2 * p - 1) * prof.eval(r2);
    });
    ipower = cyl_integrate(rule, R, [&](double, double, double r1, double r2) {
      return std::pow(prof.eval(r1) * prof.eval(r2), p);
    });
    ipotential = cyl_integrate(rule, R, [&](double, double, double r1, double r2) {
      double w = prof.eval(r2);
      return amplitude * std::exp(-kappa * sv * r1) * w * w;
    });
    rep.qlinear.push_back(ilinear * prefactor(d, R, sv));
    rep.qpower.push_back(ipower * prefactor(d, R, sv));
    rep.qpotential.push_back(ipotential * prefactor(d, R, 2.0 * std::sin(kPi / m) * sv));
  }
  const std::size_t n = R_grid.size(), h = n / 2;
  auto [mn, mx] = std::minmax_element(rep.qlinear.begin() + h, rep.qlinear.end());
  double mean = 0;
  for (std::size_t k = h; k < n; ++k) mean += rep.qlinear[k];
  mean /= double(n - h);
  rep.hat_a = mean;
  rep.plateau_variation_linear = (*mx - *mn) / mean;
  rep.ratio_power = rep.qpower.back() / rep.qpower.front();
  rep.ratio_potential = rep.qpotential.back() / rep.qpotential.front();
  rep.monotone_power = strictly_decreasing(rep.qpower);
  rep.monotone_potential = strictly_decreasing(rep.qpotential);
  rep.pass_linear = mean > 0 && rep.plateau_variation_linear < 0.05;
  rep.pass_power = rep.monotone_power && rep.ratio_power < 0.05;
  rep.pass_potential = rep.monotone_potential && rep.ratio_potential < 0.05;
  return rep;
}

std::vector<double> default_R_grid(double V_inf) {
  const double s = 1.0 / std::sqrt(V_inf);
  return geometric_grid(4 * s, 16 * s, 25);
}

InteractionReport dominance_report(const RadialProfile& prof, int m, int ell,
                                   const std::vector<double>& R_grid) {
  const double p = prof.p;
  const auto inter = inter_orbit_distances(m, ell);
  InteractionReport rep;
  std::vector<double> eps, nearest, ratio;
  const double dmin = 2.0 * std::sin(kPi / m);
  for (double R : R_grid) {
    BoundRow row;
    row.R = R;
    row.eps_R = epsilon_R(prof, m, R);
    double cross = 0;
    for (const auto& c : inter) cross += c.count * pair_interaction(p, p, R * c.dist, prof);
    row.cross_overlap = cross;
    row.dominance = cross / row.eps_R;
    rep.rows.push_back(row);
    eps.push_back(row.eps_R);
    nearest.push_back(2 * m * pair_interaction(2 * p - 1, 1, R * dmin, prof));
    ratio.push_back(row.dominance);
  }
  rep.expected_rate = dmin * std::sqrt(prof.V_inf);
  rep.eps_fit = fit_rate(R_grid, eps, prof.d);
  rep.nearest_fit = fit_rate(R_grid, nearest, prof.d);
  rep.dominance_rate = fit_rate(R_grid, ratio, 1).exponent;
  const double a_bar = rep.eps_fit.amplitude;
  for (auto& row : rep.rows)
    row.rate_residual = row.eps_R * prefactor(prof.d, row.R, rep.expected_rate) / a_bar - 1.0;
  return rep;
}

InteractionReport existence_bound(const RadialProfile& prof, int m, int ell, double beta,
                                  const PotentialSpec& pot, const std::vector<double>& R_grid) {
  if (m <= 0 || m % 2) throw ParameterError("m must be a positive even integer");
  if (m <= 2 * ell)
    throw ParameterError("existence bound requires m > 2l (got m=" + std::to_string(m) +
                         ", l=" + std::to_string(ell) + ")");
  if (beta > 0) throw ParameterError("beta must be <= 0");
  const double p = prof.p;
  InteractionReport rep = dominance_report(prof, m, ell, R_grid);
  const double nV = norm_V2(prof), n2p = norm_2p(prof);
  rep.threshold = ell * m * ground_energy(prof);
  const CylOptions opt = cyl_options_for(prof);
  for (auto& row : rep.rows) {
    double vterm = 0;
    if (pot.kind != PotentialSpec::Kind::none) {
      CylRule rule = make_cyl_rule(prof.d, row.R, opt);
      vterm = double(m) * m * cyl_integrate(rule, row.R, [&](double, double, double r1, double r2) {
                double w = prof.eval(r2);
                return std::max(0.0, pot.perturbation(r1)) * w * w;
              });
    }
    double num = ell * (m * nV + row.eps_R + vterm);
    double den = ell * (m * n2p + (2 * p - 1) * row.eps_R) +
                 beta * std::pow(double(m), 2 * p) * row.cross_overlap;
    row.threshold = rep.threshold;
    row.bound = den > 0 ? bound_value(p, num, den) : std::numeric_limits<double>::infinity();
    row.crossed = row.bound < rep.threshold;
    if (row.crossed && !rep.crossed) {
      rep.crossed = true;
      rep.R_star = row.R;
    }
  }
  return rep;
}

double cutoff_loss_V(const RadialProfile& prof, double s, double eps) {
  CutoffProfile cp = cutoff_profile(prof, s, eps);
  const double V = prof.V_inf;
  auto f = [&](double r) {
    double w = prof.eval(r), dw = prof.deriv(r);
    double c = cp.chi(r), dc = cp.dchi(r);
    double dws = dc * w + c * dw;
    return (dw * dw - dws * dws + V * w * w * (1 - c * c)) * radial_weight(prof.d, r);
  };
  double a = (1 - eps) * s, end = std::max(prof.r_last(), s + 1.0);
  return gl_panels(a, s, 16, f) + gl_panels(s, end, int(std::ceil((end - s) * 2)), f);
}

double cutoff_loss_2p(const RadialProfile& prof, double s, double eps) {
  CutoffProfile cp = cutoff_profile(prof, s, eps);
  auto f = [&](double r) {
    double c = cp.chi(r);
    return std::pow(prof.eval(r), 2 * prof.p) * (1 - std::pow(c, 2 * prof.p)) *
           radial_weight(prof.d, r);
  };
  double a = (1 - eps) * s, end = std::max(prof.r_last(), s + 1.0);
  return gl_panels(a, s, 16, f) + gl_panels(s, end, int(std::ceil((end - s) * 2)), f);
}

CutoffLossReport cutoff_losses(const RadialProfile& prof, double eps, const std::vector<double>& s_grid) {
  CutoffLossReport rep;
  rep.s = s_grid;
  for (double s : s_grid) {
    rep.loss_V.push_back(cutoff_loss_V(prof, s, eps));
    rep.loss_2p.push_back(cutoff_loss_2p(prof, s, eps));
  }
  rep.rate_V = fit_rate_with_power(rep.s, rep.loss_V);
  rep.rate_2p = fit_rate_with_power(rep.s, rep.loss_2p);
  rep.expected_V = 2 * (1 - eps) * std::sqrt(prof.V_inf);
  rep.expected_2p = 2 * prof.p * (1 - eps) * std::sqrt(prof.V_inf);
  return rep;
}

SegregatedReport segregated_bound(const RadialProfile& prof, int m, int ell,
                                  const PotentialSpec& pot, const std::vector<double>& R_grid,
                                  std::optional<CutoffSpec> cutoff) {
  SegregatedReport rep;
  rep.cutoff = cutoff ? *cutoff : CutoffSpec::midpoint(m, ell);
  if (!separation_constants(m, ell).strong_ok)
    throw ParameterError("segregated bound requires 2 sin(pi/m) < sin(pi/2l)");
  rep.cutoff.validate(m, ell);
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& c : inter_orbit_distances(m, ell)) dmin = std::min(dmin, c.dist);
  rep.min_inter_distance = dmin;
  rep.support_diameter = 2 * rep.cutoff.r;
  rep.disjoint = dmin > rep.support_diameter;
  if (!rep.disjoint) throw ParameterError("infeasible cutoff: component supports overlap");

  const double p = prof.p, V = prof.V_inf, eps = rep.cutoff.epsilon;
  const double nV = norm_V2(prof), n2p = norm_2p(prof);
  rep.threshold = ell * m * ground_energy(prof);
  const auto intra = intra_orbit_distances(m);
  for (double R : R_grid) {
    const double s = rep.cutoff.r * R;
    CutoffProfile cp = cutoff_profile(prof, s, eps);
    SegregatedRow row;
    row.R = R;
    row.threshold = rep.threshold;
    row.eps_R = epsilon_R(prof, m, R);
    double t1 = 0, t2 = 0, c_tail = 0, c_shoulder = 0, c_grad = 0;
    CylOptions opt = cyl_options_for(prof);
    for (const auto& c : intra) {
      const double D = R * c.dist;
      opt.extent = std::min(prof.r_last(), s + 1.0);
      CylRule rule = make_cyl_rule(prof.d, D, opt);
      if (D < 2 * s) {
        t1 += c.count * cyl_integrate(rule, D, [&](double z, double sp, double r1, double r2) {
          double cosang = (r1 > 0 && r2 > 0) ? (z * (z - D) + sp * sp) / (r1 * r2) : 1.0;
          return cp.deriv(r1) * cp.deriv(r2) * cosang + V * cp.eval(r1) * cp.eval(r2);
        });
        t2 += c.count * cyl_integrate(rule, D, [&](double, double, double r1, double r2) {
          return std::pow(cp.eval(r1), 2 * p - 1) * cp.eval(r2);
        });
      }
      CylOptions full = cyl_options_for(prof);
      CylRule frule = make_cyl_rule(prof.d, D, full);
      c_tail += c.count * cyl_integrate(frule, D, [&](double, double, double r1, double r2) {
        return std::pow(prof.eval(r1), 2 * p - 1) * prof.eval(r2) * (1 - cp.chi(r2));
      });
      c_shoulder += c.count * cyl_integrate(frule, D, [&](double, double, double r1, double r2) {
        double c1 = cp.chi(r1);
        return std::pow(prof.eval(r1), 2 * p - 1) * (1 - std::pow(c1, 2 * p - 1)) * cp.eval(r2);
      });
      c_grad += c.count * std::abs(cyl_integrate(frule, D, [&](double z, double sp, double r1, double r2) {
        double cosang = (r1 > 0 && r2 > 0) ? (z * (z - D) + sp * sp) / (r1 * r2) : 1.0;
        return (cp.deriv(r1) - prof.deriv(r1)) * cp.deriv(r2) * cosang;
      }));
    }
    double t3 = 0;
    if (pot.kind != PotentialSpec::Kind::none) {
      CylOptions o = cyl_options_for(prof);
      CylRule rule = make_cyl_rule(prof.d, R, o);
      t3 = double(m) * m * cyl_integrate(rule, R, [&](double, double, double r1, double r2) {
             double w = cp.eval(r2);
             return std::max(0.0, pot.perturbation(r1)) * w * w;
           });
    }
    double num = m * (nV - cutoff_loss_V(prof, s, eps)) + t1 + t3;
    double den = m * (n2p - cutoff_loss_2p(prof, s, eps)) + (2 * p - 1) * t2;
    row.bound = (p - 1) / (2 * p) * ell * std::pow(num / std::pow(den, 1.0 / p), p / (p - 1));
    row.crossed = row.bound < rep.threshold;
    row.corr_tail = c_tail / row.eps_R;
    row.corr_shoulder = c_shoulder / row.eps_R;
    row.corr_grad = c_grad / row.eps_R;
    if (row.crossed && !rep.crossed) {
      rep.crossed = true;
      rep.R_star = R;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

bool power_inequality_check(double q, std::span<const double> a) {
  if (q < 2) throw ParameterError("power inequality needs q >= 2");
  double sum = 0, rhs = 0;
  for (double x : a) {
    if (x < 0) throw ParameterError("power inequality needs nonnegative entries");
    sum += x;
    rhs += std::pow(x, q);
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j) rhs += (q - 1) * std::pow(a[i], q - 1) * a[j];
  double lhs = std::pow(sum, q);
  return lhs >= rhs - 1e-12 * std::max(std::abs(lhs), std::abs(rhs));
}

double exp_convolution(double mu1, double mu2, double sep, int d) {
  if (!(mu2 > mu1 && mu1 >= 0)) throw ParameterError("need mu2 > mu1 >= 0");
  CylOptions opt;
  double mu_min = mu1 > 0 ? mu1 : mu2;
  opt.extent = 45.0 / mu_min;
  opt.panel = std::min(1.0, 1.0 / mu2);
  opt.grading = 14;
  CylRule rule = make_cyl_rule(d, sep, opt);
  return cyl_integrate(rule, sep, [&](double, double, double r1, double r2) {
    return std::exp(-mu1 * r1 - mu2 * r2);
  });
}

double exp_convolution_check(double mu1, double mu2, double sep, int d) {
  return exp_convolution(mu1, mu2, sep, d) / std::exp(-mu1 * sep);
}

double exp_convolution_at_zero(double mu1, double mu2, int d) {
  return sphere_area(d) * std::tgamma(double(d)) / std::pow(mu1 + mu2, d);
}

ConvolutionSweep exp_convolution_sweep(double mu1, double mu2, int d, double max_sep, int count) {
  ConvolutionSweep sw;
  for (int k = 0; k < count; ++k) {
    double sep = max_sep * k / (count - 1);
    sw.sep.push_back(sep);
    sw.ratio.push_back(exp_convolution_check(mu1, mu2, sep, d));
  }
  const std::size_t h = sw.sep.size() / 2;
  std::span<const double> xs(sw.sep.data() + h, sw.sep.size() - h);
  std::span<const double> ys(sw.ratio.data() + h, sw.ratio.size() - h);
  double mean = 0;
  for (double y : ys) mean += y;
  mean /= double(ys.size());
  LinearFit f = fit_line(xs, ys);
  sw.slope_upper_rel = f.slope_upper(0.95) / mean;
  bool finite = true;
  for (double r : sw.ratio) finite = finite && std::isfinite(r) && r > 0;
  sw.bounded = finite && sw.slope_upper_rel < 0.05;
  return sw;
}

}  // namespace pinwheel
