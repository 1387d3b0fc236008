#pragma once
#include <Eigen/SparseCore>

#include "pinwheel/groups.hpp"
#include "pinwheel/params.hpp"

namespace pinwheel {

// (f o R)(x) = f(R x), R the rotation by `angle` in the (x0, x1) plane.
// Multiples of pi/2 are node permutations; other angles use band-limited
// three-shear rotation on a zero-padded grid.
Field compose_rotation(const Field& f, double angle);
// d = 1: f(-x).
Field compose_reflection(const Field& f);

bool grid_exact_angle(double angle);

enum class ProjectionMode { full, exact_subgroup };

Field symmetrize(const Field& f, const GroupSpec& spec, ProjectionMode mode = ProjectionMode::full);
SystemState pinwheel_project(const SystemState& s, ProjectionMode mode = ProjectionMode::full);

struct PinwheelCheck {
  double pinwheel = 0;    // max_n |u_{n+1} - u_n o rho| / max |u|
  double invariance = 0;  // |u_0 - u_0 o theta| / |u_0|
};
PinwheelCheck check_pinwheel(const SystemState& s);

GroupSpec analog_spec(const Params& p);

// Pinwheel states parametrized by one latent field w:
//   u_n(x) = (1/m) sum_j W(theta_j rho^n x),  W the multilinear interpolant of w (zero outside).
// Each u_n samples an exactly G-invariant function and u_{n+1} = u_n o rho holds pointwise.
class PinwheelSynthesis {
 public:
  PinwheelSynthesis(const Params& params, const Grid& grid);
  SystemState apply(const Field& w) const;
  Field adjoint(const std::vector<Field>& r) const;  // sum_n B_n^T r_n
  // Latent seed: rho-average of the components, exact-subgroup symmetrized.
  Field seed(const SystemState& s) const;
  const Params& params() const { return params_; }
  const Grid& grid() const { return grid_; }

 private:
  Params params_;
  Grid grid_;
  std::vector<Eigen::SparseMatrix<double, Eigen::RowMajor>> B_;
};

}  // namespace pinwheel
