#pragma once
#include <cmath>
#include <vector>

namespace pinwheel {

// Tensor Gauss-Legendre rule for integrals over R^d of functions of
// (z, s) where z is the coordinate along the center axis and s >= 0 the
// transverse radius. Weights include the transverse measure |S^{d-2}| s^{d-2}.
struct CylRule {
  int d = 3;
  std::vector<double> z, wz;  // axial nodes and weights
  std::vector<double> s, ws;  // transverse nodes and weights (d == 1: single node s = 0, w = 1)
};

struct CylOptions {
  double panel = 1.0;   // nominal panel width
  double extent = 40;   // integration reaches this far beyond each center
  int grading = 8;      // geometric refinement levels next to the centers
};

CylRule make_cyl_rule(int d, double sep, const CylOptions& opt);

// Sum over the rule of k(z, s, r1, r2), r1 = |x|, r2 = |x - sep e_z|.
template <class K>
double cyl_integrate(const CylRule& rule, double sep, K&& k) {
  std::vector<double> row(rule.z.size());
  for (std::size_t a = 0; a < rule.z.size(); ++a) {
    const double z = rule.z[a], dz = z - sep;
    double acc = 0;
    for (std::size_t b = 0; b < rule.s.size(); ++b) {
      const double s = rule.s[b];
      const double r1 = std::sqrt(z * z + s * s), r2 = std::sqrt(dz * dz + s * s);
      acc += rule.ws[b] * k(z, s, r1, r2);
    }
    row[a] = rule.wz[a] * acc;
  }
  double total = 0;
  for (double v : row) total += v;
  return total;
}

}  // namespace pinwheel
