#pragma once
#include <fftw3.h>

#include <vector>

#include "pinwheel/params.hpp"

namespace pinwheel {

// Per-component quadratic and nonlinear integrals of a state.
struct StateTerms {
  std::vector<double> A;               // |u_i|_V^2
  std::vector<double> P;               // |u_i|_{2p}^{2p}
  std::vector<std::vector<double>> C;  // int |u_i|^p |u_j|^p, i != j
  double sum_A() const;
  double denominator(double beta) const;  // sum P + beta sum_{i!=j} C
  double component_denominator(int i, double beta) const;
};

// Isotropic stencil applies when requested, d >= 2 and axes 0, 1 share a spacing.
bool isotropic_stencil(const Params& params, const Grid& grid);

// Discretized problem on a fixed grid: V is sampled once.
class Discretization {
 public:
  Discretization(const Params& params, const Grid& grid);

  const Grid& grid() const { return grid_; }
  const Params& params() const { return params_; }
  const std::vector<double>& V() const { return V_; }
  bool isotropic() const { return iso_; }

  double inner_V(const Field& u, const Field& v) const;
  double power_integral(const Field& u, double q) const;            // int |u|^q
  double cross_integral(const Field& u, const Field& v, double q) const;  // int |u|^q |v|^q
  Field neg_laplacian(const Field& u) const;

  StateTerms terms(const SystemState& s) const;
  double energy(const SystemState& s) const;
  std::vector<Field> gradient(const SystemState& s) const;

 private:
  Params params_;
  Grid grid_;
  std::vector<double> V_;
  bool iso_ = false;
};

double inner_V(const Field& u, const Field& v, const PotentialSpec& pot);
double system_energy(const SystemState& s);
std::vector<Field> system_gradient(const SystemState& s);

// Throws InfeasibleProjection naming the first component with
// |u_i|_{2p}^{2p} + beta sum_{j!=i} C_ij <= 0.
void check_feasible(const StateTerms& t, double beta);
double nehari_scalar(const StateTerms& t, double beta, double p);
double nehari_energy(const StateTerms& t, double beta, double p);
double nehari_scalar(const SystemState& s);
double nehari_energy(const SystemState& s);

struct ResidualReport {
  std::vector<double> per_component;
  bool degenerate = false;
};
ResidualReport residual(const SystemState& s);
ResidualReport residual(const Discretization& disc, const SystemState& s);

double single_energy(const Field& u, const PotentialSpec& pot, double p);
double single_nehari_scalar(const Field& u, const PotentialSpec& pot, double p);
double single_nehari(const Field& u, const PotentialSpec& pot, double p);

// Components count as nontrivial when |u_i|_V > 1e-8 max_j |u_j|_V.
bool all_nontrivial(const StateTerms& t);

// (-Delta_h + shift)^{-1} with homogeneous Dirichlet data, via DST-I.
class HelmholtzSolver {
 public:
  HelmholtzSolver(const Grid& grid, double shift, bool isotropic = false);
  ~HelmholtzSolver();
  HelmholtzSolver(const HelmholtzSolver&) = delete;
  HelmholtzSolver& operator=(const HelmholtzSolver&) = delete;

  Field apply(const Field& f) const;

 private:
  Grid grid_;
  std::vector<double> eig_;
  double* buf_ = nullptr;
  fftw_plan plan_ = nullptr;
  double norm_ = 1.0;
};

}  // namespace pinwheel
