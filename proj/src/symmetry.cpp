#include "pinwheel/symmetry.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

#include "pinwheel/errors.hpp"
#include "pinwheel/numerics.hpp"

namespace pinwheel {

namespace {

struct LinePlans {
  int M = 0;
  double* in = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
  explicit LinePlans(int len) : M(len) {
    in = fftw_alloc_real(M);
    spec = fftw_alloc_complex(M / 2 + 1);
    fwd = fftw_plan_dft_r2c_1d(M, in, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(M, spec, in, FFTW_ESTIMATE);
  }
  ~LinePlans() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(spec);
  }
};

std::mutex plan_mutex;

LinePlans& plans_for(int M) {
  static std::map<int, std::unique_ptr<LinePlans>> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& p = cache[M];
  if (!p) p = std::make_unique<LinePlans>(M);
  return *p;
}

// g(x) = line(x + t) for a periodic band-limited line with spacing h.
void shift_line(LinePlans& P, double* line, std::ptrdiff_t stride, double t, double h) {
  const int M = P.M;
  for (int k = 0; k < M; ++k) P.in[k] = line[k * stride];
  fftw_execute(P.fwd);
  const double w = 2.0 * kPi / (M * h);
  for (int q = 0; q <= M / 2; ++q) {
    double ph = w * q * t;
    std::complex<double> c(P.spec[q][0], P.spec[q][1]);
    if (M % 2 == 0 && q == M / 2)
      c *= std::cos(ph);
    else
      c *= std::polar(1.0, ph);
    P.spec[q][0] = c.real();
    P.spec[q][1] = c.imag();
  }
  fftw_execute(P.bwd);
  for (int k = 0; k < M; ++k) line[k * stride] = P.in[k] / M;
}

void require_rotatable(const Grid& g) {
  if (!g.origin_centered()) throw SymmetryMismatch("grid is not origin-centered");
  if (!g.square()) throw SymmetryMismatch("rotation needs identical axes 0 and 1");
}

// f o R_{k pi/2} by node permutation.
Field rotate_quarter(const Field& f, int k) {
  k = ((k % 4) + 4) % 4;
  if (k == 0) return f;
  const Grid& g = f.grid;
  const int n = g.n[0], nz = g.n[2];
  Field out(g);
  out.warnings = f.warnings;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int si, sj;
      if (k == 1) { si = n - 1 - j; sj = i; }
      else if (k == 2) { si = n - 1 - i; sj = n - 1 - j; }
      else { si = j; sj = n - 1 - i; }
      const double* src = &f.v[(std::size_t(si) * n + sj) * nz];
      double* dst = &out.v[(std::size_t(i) * n + j) * nz];
      for (int z = 0; z < nz; ++z) dst[z] = src[z];
    }
  return out;
}

// f o R_phi for |phi| <= pi/4 via three shears: R = Sx(a) Sy(b) Sx(a).
Field rotate_small(const Field& f, double phi) {
  const Grid& g = f.grid;
  const int n = g.n[0], nz = g.n[2];
  const int pad = (n + 1) / 2, M = n + 2 * pad;
  const double h = g.h[0], c = 0.5 * (M - 1);
  const double a = -std::tan(0.5 * phi), b = std::sin(phi);
  LinePlans& P = plans_for(M);
  std::vector<double> buf(std::size_t(M) * M);
  Field out(g);
  out.warnings = f.warnings;
  for (int z = 0; z < nz; ++z) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        buf[std::size_t(i + pad) * M + (j + pad)] = f.v[(std::size_t(i) * n + j) * nz + z];
    // x-shear: lines along axis 0, shift a*y.
    auto shear_x = [&](double coef) {
      for (int J = 0; J < M; ++J) shift_line(P, &buf[J], M, coef * (J - c) * h, h);
    };
    shear_x(a);
    for (int I = 0; I < M; ++I) shift_line(P, &buf[std::size_t(I) * M], 1, b * (I - c) * h, h);
    shear_x(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.v[(std::size_t(i) * n + j) * nz + z] = buf[std::size_t(i + pad) * M + (j + pad)];
  }
  return out;
}

}  // namespace

bool grid_exact_angle(double angle) {
  double q = angle / (0.5 * kPi);
  return std::abs(q - std::round(q)) < 1e-12;
}

Field compose_reflection(const Field& f) {
  if (!f.grid.origin_centered()) throw SymmetryMismatch("grid is not origin-centered");
  Field out(f.grid);
  out.warnings = f.warnings;
  const std::size_t n = f.size();
  for (std::size_t k = 0; k < n; ++k) out.v[k] = f.v[n - 1 - k];
  return out;
}

Field compose_rotation(const Field& f, double angle) {
  if (f.grid.d < 2) throw SymmetryMismatch("planar rotation needs d >= 2");
  require_rotatable(f.grid);
  const int k = int(std::lround(angle / (0.5 * kPi)));
  const double rest = angle - k * 0.5 * kPi;
  Field g = rotate_quarter(f, k);
  if (std::abs(rest) < 1e-14) return g;
  return rotate_small(g, rest);
}

GroupSpec analog_spec(const Params& p) {
  GroupSpec s;
  s.m = p.m;
  s.ell = p.ell;
  s.mode = GroupMode::analog;
  s.dim = p.d;
  return s;
}

namespace {

Field compose_theta(const Field& f, int m, int j) {
  if (f.grid.d == 1) return (j % 2) ? compose_reflection(f) : f;
  return compose_rotation(f, 2.0 * kPi * j / m);
}

Field compose_rho(const Field& f, int ell, int n) {
  if (f.grid.d == 1) return f;
  return compose_rotation(f, kPi * n / ell);
}

void accumulate(Field& acc, const Field& f, double w) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc.v[k] += w * f.v[k];
}

}  // namespace

Field symmetrize(const Field& f, const GroupSpec& spec, ProjectionMode mode) {
  if (spec.mode != GroupMode::analog)
    throw SymmetryMismatch("symmetrize acts on analog-mode grids only");
  if (f.grid.d != spec.dim) throw SymmetryMismatch("field and group dimensions differ");
  if (!f.grid.origin_centered()) throw SymmetryMismatch("grid is not origin-centered");
  std::vector<int> members;
  for (int j = 0; j < spec.m; ++j) {
    bool exact = f.grid.d == 1 || grid_exact_angle(2.0 * kPi * j / spec.m);
    if (mode == ProjectionMode::full || exact) members.push_back(j);
  }
  Field acc(f.grid);
  acc.warnings = f.warnings;
  const double w = 1.0 / double(members.size());
  for (int j : members) accumulate(acc, j == 0 ? f : compose_theta(f, spec.m, j), w);
  acc.g_invariant = mode == ProjectionMode::full;
  return acc;
}

SystemState pinwheel_project(const SystemState& s, ProjectionMode mode) {
  s.validate();
  const int ell = s.ell();
  GroupSpec spec = analog_spec(s.params);
  spec.ell = std::max(ell, 2);
  Field base(s.grid());
  base.warnings = s.u.front().warnings;
  for (int n = 0; n < ell; ++n)
    accumulate(base, n == 0 ? s.u[0] : compose_rho(s.u[n], ell, -n), 1.0 / ell);
  base = symmetrize(base, spec, mode);
  SystemState out;
  out.params = s.params;
  out.u.reserve(ell);
  for (int n = 0; n < ell; ++n) out.u.push_back(n == 0 ? base : compose_rho(base, ell, n));
  for (auto& f : out.u) f.g_invariant = base.g_invariant;
  out.pinwheel = true;
  return out;
}

PinwheelCheck check_pinwheel(const SystemState& s) {
  s.validate();
  const int ell = s.ell();
  double scale = 0;
  for (const Field& f : s.u) scale = std::max(scale, l2_norm(f));
  PinwheelCheck c;
  if (scale == 0) return c;
  for (int n = 0; n < ell; ++n) {
    Field mapped = compose_rho(s.u[n], ell, 1);
    const Field& next = s.u[(n + 1) % ell];
    Field diff(next.grid);
    for (std::size_t k = 0; k < diff.size(); ++k) diff.v[k] = next.v[k] - mapped.v[k];
    c.pinwheel = std::max(c.pinwheel, l2_norm(diff) / scale);
  }
  Field rot = compose_theta(s.u[0], s.params.m, 1);
  Field diff(rot.grid);
  for (std::size_t k = 0; k < diff.size(); ++k) diff.v[k] = s.u[0].v[k] - rot.v[k];
  double n0 = l2_norm(s.u[0]);
  c.invariance = n0 > 0 ? l2_norm(diff) / n0 : 0.0;
  return c;
}

}  // namespace pinwheel

namespace pinwheel {

PinwheelSynthesis::PinwheelSynthesis(const Params& params, const Grid& grid) : params_(params), grid_(grid) {
  params.validate();
  if (grid.d != params.d) throw SymmetryMismatch("grid and parameter dimensions differ");
  if (!grid.origin_centered()) throw SymmetryMismatch("grid is not origin-centered");
  if (grid.d >= 2 && !grid.square()) throw SymmetryMismatch("rotation needs identical axes 0 and 1");
  const int m = params.m, ell = params.ell, nz = grid.n[2];
  const std::size_t N = grid.size();
  const double wj = 1.0 / m;
  for (int n = 0; n < ell; ++n) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(N * m * (grid.d == 1 ? 1 : 4));
    for (std::size_t k = 0; k < N; ++k) {
      if (grid.d == 1) {
        for (int j = 0; j < m; ++j) trip.emplace_back(int(k), int(j % 2 ? N - 1 - k : k), wj);
        continue;
      }
      const std::size_t plane = k / nz;
      const int z = int(k % nz);
      const int i = int(plane / grid.n[1]), jj = int(plane % grid.n[1]);
      const double x0 = grid.coord(0, i), x1 = grid.coord(1, jj);
      for (int j = 0; j < m; ++j) {
        const double ang = 2.0 * kPi * j / m + kPi * n / ell;
        const double c = std::cos(ang), s = std::sin(ang);
        double fi = (c * x0 - s * x1 - grid.lo[0]) / grid.h[0];
        double fj = (s * x0 + c * x1 - grid.lo[1]) / grid.h[1];
        if (grid_exact_angle(ang)) {
          fi = std::round(fi);
          fj = std::round(fj);
        }
        const int i0 = int(std::floor(fi)), j0 = int(std::floor(fj));
        const double ti = fi - i0, tj = fj - j0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const double w = (a ? ti : 1 - ti) * (b ? tj : 1 - tj);
            const int ii = i0 + a, jb = j0 + b;
            if (w == 0 || ii < 0 || ii >= grid.n[0] || jb < 0 || jb >= grid.n[1]) continue;
            trip.emplace_back(int(k), int((std::size_t(ii) * grid.n[1] + jb) * nz + z), wj * w);
          }
      }
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> B{Eigen::Index(N), Eigen::Index(N)};
    B.setFromTriplets(trip.begin(), trip.end());
    B_.push_back(std::move(B));
  }
}

SystemState PinwheelSynthesis::apply(const Field& w) const {
  if (!(w.grid == grid_)) throw SymmetryMismatch("latent field lives on another grid");
  SystemState s;
  s.params = params_;
  Eigen::Map<const Eigen::VectorXd> x(w.v.data(), Eigen::Index(w.size()));
  for (const auto& B : B_) {
    Field u(grid_);
    u.warnings = w.warnings;
    u.g_invariant = true;
    Eigen::Map<Eigen::VectorXd>(u.v.data(), Eigen::Index(u.size())) = B * x;
    s.u.push_back(std::move(u));
  }
  s.pinwheel = true;
  return s;
}

Field PinwheelSynthesis::adjoint(const std::vector<Field>& r) const {
  if (r.size() != B_.size()) throw SymmetryMismatch("component count differs from l");
  Field out(grid_);
  Eigen::Map<Eigen::VectorXd> y(out.v.data(), Eigen::Index(out.size()));
  for (std::size_t n = 0; n < B_.size(); ++n)
    y += B_[n].transpose() * Eigen::Map<const Eigen::VectorXd>(r[n].v.data(), Eigen::Index(r[n].size()));
  return out;
}

Field PinwheelSynthesis::seed(const SystemState& s) const {
  return pinwheel_project(s, ProjectionMode::exact_subgroup).u.front();
}

}  // namespace pinwheel
