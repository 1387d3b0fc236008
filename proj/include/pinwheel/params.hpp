#pragma once
#include <string>
#include <vector>

#include "pinwheel/grid.hpp"

namespace pinwheel {

struct PotentialSpec {
  enum class Kind { none, exp_tail, radial_table };
  double V_inf = 1.0;
  Kind kind = Kind::none;
  double A = 0.0;      // exp_tail amplitude
  double kappa = 0.0;  // exp_tail rate multiplier: V = V_inf + A exp(-kappa sqrt(V_inf) r)
  std::vector<double> table_r, table_V;  // radial_table samples, linear in between

  double operator()(double r) const;
  double perturbation(double r) const { return (*this)(r) - V_inf; }
  // (V_3^m): kappa in (2 sin(pi/m), 2).
  bool kappa_admissible(int m) const;
  void validate() const;
};

// Laplacian: 2d+1 point, or the isotropic 9-point form in the (x0, x1) plane.
enum class Stencil { standard, isotropic };

struct Params {
  int d = 2;
  int ell = 2;
  int m = 6;
  double p = 2.0;
  double beta = -1.0;
  PotentialSpec pot;
  Stencil stencil = Stencil::isotropic;

  void validate() const;
};

struct SystemState {
  std::vector<Field> u;
  Params params;
  bool pinwheel = false;

  const Grid& grid() const { return u.front().grid; }
  int ell() const { return int(u.size()); }
  void validate() const;
};

// Potential sampled at grid nodes; throws if inf V <= 0.
std::vector<double> sample_potential(const PotentialSpec& pot, const Grid& g);

}  // namespace pinwheel
