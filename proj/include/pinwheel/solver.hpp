#pragma once
#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pinwheel/energy.hpp"
#include "pinwheel/groundstate.hpp"
#include "pinwheel/symmetry.hpp"

namespace pinwheel {

struct SolveOptions {
  enum class StepRule { fixed, backtracking };
  enum class Method { steepest, conjugate };
  int max_iters = 3000;
  StepRule step = StepRule::backtracking;
  Method method = Method::steepest;
  double fixed_step = 0.5;
  double armijo = 1e-4;
  double tol = 1e-5;        // max per-component projected gradient norm, relative
  double alpha0 = 1.0;      // first trial step
  double alpha_max = 8.0;
  double alpha_min = 1e-12;
  std::uint64_t seed = 0;
  double perturbation = 0.0;  // relative amplitude of seeded noise added to the initial state
  int drift_every = 50;
  void validate() const;
};

struct DiagnosticsRow {
  int iter = 0;
  double energy = 0, s_u = 0, step = 0;
  double grad_norm = 0;     // gradient over pinwheel states, relative to |u|_V
  double raw_residual = 0;  // unprojected gradient, same scaling
  double nehari_defect = 0;  // |J'(u)u| / |u|_V^2
  double overlap = 0;        // sum_{i<j} int |u_i|^p |u_j|^p
  double pinwheel = 0;
};

struct Diagnostics {
  std::vector<DiagnosticsRow> rows;
  bool converged = false;
  int iterations = 0;
  double initial_energy = 0;
  std::vector<std::string> warnings;
  void write_csv(std::ostream& os) const;
};

struct SolveResult {
  SystemState state;
  Diagnostics diag;
  double energy = 0;
};

// Preconditioned descent of the Nehari energy over pinwheel states.
SolveResult minimize(const SystemState& initial, const SolveOptions& opts);

struct ContinuationSchedule {
  std::vector<double> betas;
  bool warm_start = true;
  void validate() const;
};

struct OverlapMetrics {
  std::vector<std::vector<double>> pair;  // int |u_i|^p |u_j|^p
  double total = 0;                       // sum over i < j
  double beta_times_total = 0;
  double support_intersection = 0;  // measure of {u_i > delta and u_j > delta for some i != j}
  double support_fraction = 0;
  double delta = 0;
};
OverlapMetrics overlap_metrics(const SystemState& s, double rel_threshold = 1e-3);

struct ContinuationStep {
  double beta = 0;
  SolveResult result;
  OverlapMetrics overlap;
};
std::vector<ContinuationStep> continuation(const SystemState& initial, const ContinuationSchedule& schedule,
                                           const SolveOptions& opts);
void write_continuation_csv(std::ostream& os, const std::vector<ContinuationStep>& steps);

struct PartitionResult {
  std::vector<std::vector<char>> masks;
  std::vector<double> measure;
  std::vector<std::vector<double>> pair_overlap;  // zero by construction
  std::vector<int> connected_sets;
  std::vector<double> mapping_residual;  // |rho(mask_j) xor mask_{j+1}| / |mask_{j+1}|
  std::vector<double> domain_energy;     // single-equation Nehari energy of u_j restricted to mask_j
  bool disjoint = true;
};
PartitionResult extract_partition(const SystemState& s, double rel_threshold = 1e-3);

struct SignChanging {
  Field w;
  double residual = 0;      // single-equation residual of w, relative
  double antisymmetry = 0;  // |w o tau + w| / |w|
  double min = 0, max = 0;
};
SignChanging sign_changing(const SystemState& s);

struct DriftReport {
  std::array<double, 3> center{0, 0, 0};
  double center_norm = 0;
  double boundary_fraction = 0;
  bool flagged = false;
};
DriftReport drift_diagnostic(const SystemState& s);

// Centers of the analog orbit of component n: rho^{-n} theta^j (R base).
std::vector<std::array<double, 3>> analog_centers(const Params& params, double R, int n,
                                                  std::array<double, 3> base = {1, 0, 0});
SystemState ansatz_state(const Params& params, const Grid& grid, const RadialProfile& prof, double R,
                         std::array<double, 3> base = {1, 0, 0});

struct AnsatzScan {
  std::vector<double> R, energy;
  double best_R = 0, best_energy = 0;
};
// Discrete Nehari energy of the analog ansatz over R; infeasible radii are skipped.
AnsatzScan analog_ansatz_scan(const Params& params, const Grid& grid, const RadialProfile& prof,
                              const std::vector<double>& R_grid);

}  // namespace pinwheel
