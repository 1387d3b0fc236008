#include "pinwheel/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "pinwheel/numerics.hpp"

namespace pinwheel {

namespace {

constexpr int kOrder = 12;

void add_panel(double a, double b, std::vector<double>& x, std::vector<double>& w) {
  using GL = boost::math::quadrature::gauss<double, kOrder>;
  const auto& ab = GL::abscissa();
  const auto& wt = GL::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t k = 0; k < ab.size(); ++k) {
    x.push_back(c - h * ab[k]);
    w.push_back(h * wt[k]);
    x.push_back(c + h * ab[k]);
    w.push_back(h * wt[k]);
  }
}

// Panels on [a, b] graded geometrically towards any of the listed points.
void add_interval(double a, double b, const std::vector<double>& focus, const CylOptions& opt,
                  std::vector<double>& x, std::vector<double>& w) {
  if (b <= a) return;
  std::vector<double> cuts{a, b};
  for (double f : focus) {
    if (f < a - 1e-12 || f > b + 1e-12) continue;
    double step = std::min(opt.panel, b - a);
    for (int g = 1; g <= opt.grading; ++g) {
      double off = step * std::ldexp(1.0, -g);
      if (f + off < b) cuts.push_back(f + off);
      if (f - off > a) cuts.push_back(f - off);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double lo = cuts[k], hi = cuts[k + 1];
    if (hi - lo < 1e-14) continue;
    int np = std::max(1, int(std::ceil((hi - lo) / opt.panel - 1e-9)));
    for (int q = 0; q < np; ++q) add_panel(lo + (hi - lo) * q / np, lo + (hi - lo) * (q + 1) / np, x, w);
  }
}

}  // namespace

CylRule make_cyl_rule(int d, double sep, const CylOptions& opt) {
  CylRule r;
  r.d = d;
  std::vector<double> zb{-opt.extent, 0.0};
  if (sep > 0) zb.push_back(sep);
  zb.push_back(sep + opt.extent);
  const std::vector<double> focus{0.0, sep};
  for (std::size_t k = 0; k + 1 < zb.size(); ++k) add_interval(zb[k], zb[k + 1], focus, opt, r.z, r.wz);
  if (d == 1) {
    r.s = {0.0};
    r.ws = {1.0};
    return r;
  }
  add_interval(0.0, opt.extent, {0.0}, opt, r.s, r.ws);
  const double area = sphere_area(d - 1);
  for (std::size_t k = 0; k < r.s.size(); ++k) r.ws[k] *= area * std::pow(r.s[k], d - 2);
  return r;
}

}  // namespace pinwheel
