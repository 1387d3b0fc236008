#include <array>
#include <cmath>
#include <mutex>

#include "pinwheel/energy.hpp"
#include "pinwheel/errors.hpp"
#include "pinwheel/numerics.hpp"

namespace pinwheel {

namespace {
std::mutex planner_mutex;
}

HelmholtzSolver::HelmholtzSolver(const Grid& grid, double shift, bool isotropic) : grid_(grid) {
  if (!(shift > 0)) throw ParameterError("Helmholtz shift must be positive");
  const std::size_t n = grid.size();
  eig_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t rest = k;
    std::array<int, 3> idx{};
    idx[2] = int(rest % grid.n[2]); rest /= grid.n[2];
    idx[1] = int(rest % grid.n[1]); idx[0] = int(rest / grid.n[1]);
    double lam = shift;
    std::array<double, 3> s2{};
    for (int a = 0; a < grid.d; ++a) {
      double s = std::sin(kPi * (idx[a] + 1) / (2.0 * (grid.n[a] + 1)));
      s2[a] = s * s;
      lam += 4.0 * s2[a] / (grid.h[a] * grid.h[a]);
    }
    if (isotropic) lam -= 8.0 / 3.0 * s2[0] * s2[1] / (grid.h[0] * grid.h[0]);
    eig_[k] = lam;
  }
  norm_ = 1.0;
  int dims[3];
  fftw_r2r_kind kinds[3];
  for (int a = 0; a < grid.d; ++a) {
    dims[a] = grid.n[a];
    kinds[a] = FFTW_RODFT00;
    norm_ *= 2.0 * (grid.n[a] + 1);
  }
  std::lock_guard<std::mutex> lock(planner_mutex);
  buf_ = fftw_alloc_real(n);
  plan_ = fftw_plan_r2r(grid.d, dims, buf_, buf_, kinds, FFTW_ESTIMATE);
}

HelmholtzSolver::~HelmholtzSolver() {
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(plan_);
  fftw_free(buf_);
}

Field HelmholtzSolver::apply(const Field& f) const {
  const std::size_t n = eig_.size();
  for (std::size_t k = 0; k < n; ++k) buf_[k] = f.v[k];
  fftw_execute(plan_);
  for (std::size_t k = 0; k < n; ++k) buf_[k] /= eig_[k] * norm_;
  fftw_execute(plan_);
  Field out(grid_);
  for (std::size_t k = 0; k < n; ++k) out.v[k] = buf_[k];
  return out;
}

}  // namespace pinwheel
