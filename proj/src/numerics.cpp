#include "pinwheel/numerics.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

namespace pinwheel {

double pairwise_sum(std::span<const double> x) {
  return pairwise_sum_fn(0, x.size(), [&](std::size_t k) { return x[k]; });
}

double sphere_area(int d) {
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) { mx += x[k]; my += y[k]; }
  mx /= n; my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  LinearFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double sse = 0;
    for (std::size_t k = 0; k < n; ++k) {
      double e = y[k] - f.intercept - f.slope * x[k];
      sse += e * e;
    }
    double s2 = sse / double(n - 2);
    f.slope_stderr = std::sqrt(s2 / sxx);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return f;
}

double LinearFit::slope_upper(double level) const {
  if (n <= 2) return slope;
  boost::math::students_t dist(double(n - 2));
  return slope + boost::math::quantile(dist, level) * slope_stderr;
}

std::vector<double> fornberg_weights(double x0, std::span<const double> z, int order) {
  const int n = int(z.size()) - 1;
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0, c4 = z[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, order);
    double c2 = 1.0, c5 = c4;
    c4 = z[i] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = z[i] - z[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][order];
  return w;
}

double integrate_samples(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  std::vector<double> parts;
  parts.reserve(n / 2 + 1);
  std::size_t k = 0;
  for (; k + 2 < n; k += 2) {
    double h0 = x[k + 1] - x[k], h1 = x[k + 2] - x[k + 1], H = h0 + h1;
    parts.push_back(H / 6.0 *
                    ((2.0 - h1 / h0) * f[k] + H * H / (h0 * h1) * f[k + 1] +
                     (2.0 - h0 / h1) * f[k + 2]));
  }
  if (k + 1 < n) {
    // Last odd interval: quadratic through the final three nodes.
    double a = x[n - 3], b = x[n - 2], c = x[n - 1];
    double fa = f[n - 3], fb = f[n - 2], fc = f[n - 1];
    double h = c - b;
    // Integral over [b, c] of the interpolating parabola.
    double wa = -h * h * h / (6.0 * (b - a) * (c - a));
    double wb = h * (h + 3.0 * (b - a)) / (6.0 * (b - a));
    double wc = h * (2.0 * h + 3.0 * (b - a)) / (6.0 * (c - a));
    parts.push_back(wa * fa + wb * fb + wc * fc);
  }
  return pairwise_sum(parts);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k)
    g[k] = count == 1 ? lo : lo * std::pow(hi / lo, double(k) / double(count - 1));
  return g;
}

}  // namespace pinwheel
