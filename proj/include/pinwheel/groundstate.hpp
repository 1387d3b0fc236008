#pragma once
#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "pinwheel/grid.hpp"

namespace pinwheel {

// Radial node spacing, in units of 1/sqrt(V_inf).
struct RadialGridSpec {
  double h_min = 1e-3;
  double h_max = 1e-2;
  double growth = 1.02;
  double r_max = 0.0;  // 0: automatic (omega(r_max)/omega(0) < 1e-12)
};

struct DecayFit {
  double a_N = 0, exponent = 0;
  double r_lo = 0, r_hi = 0;
  double residual = 0;  // relative plateau variation on the window
  double b_N = 0;
  double C1 = 0, C2 = 0;  // constants of the two-sided bound
};

struct RadialProfile {
  int d = 1;
  double p = 2, V_inf = 1;
  std::vector<double> r, w, dw;
  double bracket_lo = 0, bracket_hi = 0;
  double r_match = 0;
  double match_slope_error = 0;
  DecayFit fit;

  double omega0() const { return w.front(); }
  double r_last() const { return r.back(); }
  double eval(double rr) const;
  double deriv(double rr) const;
  // Integral over R^d of f(r, omega, omega') for a radial integrand.
  double integrate(const std::function<double(double, double, double)>& f) const;
};

RadialProfile solve_ground_state(int d, double p, double V_inf, const RadialGridSpec& grid = {});

double norm_V2(const RadialProfile& prof);     // |nabla w|^2 + V w^2
double norm_2p(const RadialProfile& prof);     // |w|_{2p}^{2p}
double ground_energy(const RadialProfile& prof);
DecayFit fit_decay(const RadialProfile& prof);
double ode_residual(const RadialProfile& prof);  // relative sup norm on the fit window

Field embed_radial(const RadialProfile& prof, std::array<double, 3> center, const Grid& grid);

void write_profile(std::ostream& os, const RadialProfile& prof);

}  // namespace pinwheel
