#pragma once
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pinwheel/groundstate.hpp"
#include "pinwheel/params.hpp"
#include "pinwheel/quadrature.hpp"

namespace pinwheel {

// Radii choice for the truncated ansatz: 2 sin(pi/m) < delta/2 < r < sin(pi/2l).
struct CutoffSpec {
  double delta = 0, epsilon = 0, r = 0;
  static CutoffSpec midpoint(int m, int ell);
  void validate(int m, int ell) const;
};

// cos^2 shoulder: chi = 1 on [0, (1-eps)s], 0 beyond s.
struct CutoffProfile {
  const RadialProfile* base = nullptr;
  double s = 0, eps = 0;
  double chi(double r) const;
  double dchi(double r) const;
  double eval(double r) const { return chi(r) * base->eval(r); }
  double deriv(double r) const { return dchi(r) * base->eval(r) + chi(r) * base->deriv(r); }
  double support_radius() const { return s; }
};

CutoffProfile cutoff_profile(const RadialProfile& prof, double s, double eps);

CylOptions cyl_options_for(const RadialProfile& prof);

// int w^a(x) w^b(x - xi), |xi| = sep.
double pair_interaction(double a, double b, double sep, const RadialProfile& prof,
                        std::vector<std::string>* warnings = nullptr);

// Orbit-pair distance classes (unit orbit radius) with multiplicities.
struct DistanceClass {
  double dist = 0;
  int count = 0;
};
std::vector<DistanceClass> intra_orbit_distances(int m);
std::vector<DistanceClass> inter_orbit_distances(int m, int ell);

double epsilon_R(const RadialProfile& prof, int m, double R);

struct RateFit {
  double exponent = 0, amplitude = 0;
  double plateau_variation = 0;  // over the fit window
};
// Fits log(y R^{(d-1)/2}) = c - k R on the top half of the grid.
RateFit fit_rate(std::span<const double> R, std::span<const double> y, int d);

struct AsymptoticsReport {
  std::vector<double> R, qlinear, qpower, qpotential;
  double hat_a = 0;
  double plateau_variation_linear = 0;
  double ratio_power = 0, ratio_potential = 0;
  bool monotone_power = false, monotone_potential = false;
  double kappa = 0;
  bool pass_linear = false, pass_power = false, pass_potential = false;
};
// The potential term uses V = V_inf + A exp(-kappa sqrt(V_inf) r) with kappa = 1.5 * 2 sin(pi/m).
AsymptoticsReport verify_interaction_asymptotics(const RadialProfile& prof,
                                                 const std::vector<double>& R_grid, int m,
                                                 double amplitude = 1.0);

struct BoundRow {
  double R = 0, eps_R = 0, rate_residual = 0;
  double bound = 0, threshold = 0;
  bool crossed = false;
  double cross_overlap = 0;  // sum_{i!=n} sum_{j,k} int w^p w^p
  double dominance = 0;      // cross_overlap / eps_R
};

struct InteractionReport {
  std::vector<BoundRow> rows;
  double threshold = 0;
  RateFit eps_fit, nearest_fit;
  double expected_rate = 0;
  bool crossed = false;
  double R_star = 0;
  double dominance_rate = 0;  // fitted decay exponent of cross_overlap / eps_R
};

std::vector<double> default_R_grid(double V_inf);

// Dominance of inter-orbit p-p overlaps over eps_R; no precondition on m.
InteractionReport dominance_report(const RadialProfile& prof, int m, int ell,
                                   const std::vector<double>& R_grid);

InteractionReport existence_bound(const RadialProfile& prof, int m, int ell, double beta,
                                  const PotentialSpec& pot, const std::vector<double>& R_grid);

struct CutoffLossReport {
  std::vector<double> s, loss_V, loss_2p;
  double rate_V = 0, rate_2p = 0;
  double expected_V = 0, expected_2p = 0;
};
double cutoff_loss_V(const RadialProfile& prof, double s, double eps);
double cutoff_loss_2p(const RadialProfile& prof, double s, double eps);
CutoffLossReport cutoff_losses(const RadialProfile& prof, double eps, const std::vector<double>& s_grid);

struct SegregatedRow {
  double R = 0, bound = 0, threshold = 0;
  bool crossed = false;
  double eps_R = 0;
  double corr_tail = 0, corr_shoulder = 0, corr_grad = 0;  // ratios to eps_R
};

struct SegregatedReport {
  CutoffSpec cutoff;
  double min_inter_distance = 0;  // unit orbit radius
  double support_diameter = 0;    // 2 r, unit orbit radius
  bool disjoint = false;
  std::vector<SegregatedRow> rows;
  double threshold = 0;
  bool crossed = false;
  double R_star = 0;
};

SegregatedReport segregated_bound(const RadialProfile& prof, int m, int ell,
                                  const PotentialSpec& pot, const std::vector<double>& R_grid,
                                  std::optional<CutoffSpec> cutoff = std::nullopt);

bool power_inequality_check(double q, std::span<const double> a);

double exp_convolution(double mu1, double mu2, double sep, int d);
double exp_convolution_check(double mu1, double mu2, double sep, int d);  // ratio to e^{-mu1 sep}
double exp_convolution_at_zero(double mu1, double mu2, int d);             // closed form

struct ConvolutionSweep {
  std::vector<double> sep, ratio;
  double slope_upper_rel = 0;  // 95% upper bound of relative slope on the top half
  bool bounded = false;
};
ConvolutionSweep exp_convolution_sweep(double mu1, double mu2, int d, double max_sep, int count);

}  // namespace pinwheel
