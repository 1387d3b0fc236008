#pragma once
#include <cstddef>
#include <span>
#include <vector>

namespace pinwheel {

inline constexpr double kPi = 3.14159265358979323846;

// Fixed-order pairwise summation; result is independent of thread count.
double pairwise_sum(std::span<const double> x);

template <class F>
double pairwise_sum_fn(std::size_t lo, std::size_t hi, F&& f) {
  if (hi - lo <= 64) {
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += f(k);
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_fn(lo, mid, f) + pairwise_sum_fn(mid, hi, f);
}

// |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2); equals 2 for d = 1.
double sphere_area(int d);

struct LinearFit {
  double intercept = 0, slope = 0;
  double slope_stderr = 0, intercept_stderr = 0;
  std::size_t n = 0;
  // Upper one-sided confidence bound on the slope at the given level.
  double slope_upper(double level) const;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Fornberg finite-difference weights for derivative `order` at x0 from nodes.
std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int order);

// Nonuniform composite Simpson rule on (x, f) samples.
double integrate_samples(std::span<const double> x, std::span<const double> f);

std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

}  // namespace pinwheel
