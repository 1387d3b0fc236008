#include "pinwheel/params.hpp"

#include <algorithm>
#include <cmath>

#include "pinwheel/errors.hpp"
#include "pinwheel/numerics.hpp"

namespace pinwheel {

double PotentialSpec::operator()(double r) const {
  switch (kind) {
    case Kind::none:
      return V_inf;
    case Kind::exp_tail:
      return V_inf + A * std::exp(-kappa * std::sqrt(V_inf) * r);
    case Kind::radial_table: {
      if (r >= table_r.back()) return V_inf;
      if (r <= table_r.front()) return table_V.front();
      auto it = std::upper_bound(table_r.begin(), table_r.end(), r);
      std::size_t k = std::size_t(it - table_r.begin()) - 1;
      double t = (r - table_r[k]) / (table_r[k + 1] - table_r[k]);
      return (1 - t) * table_V[k] + t * table_V[k + 1];
    }
  }
  return V_inf;
}

bool PotentialSpec::kappa_admissible(int m) const {
  return kind == Kind::exp_tail && kappa > 2.0 * std::sin(kPi / m) && kappa < 2.0;
}

void PotentialSpec::validate() const {
  if (!(V_inf > 0)) throw ParameterError("V_inf must be positive");
  if (kind == Kind::exp_tail) {
    if (!(kappa > 0)) throw ParameterError("exp_tail needs kappa > 0");
    if (V_inf + std::min(A, 0.0) <= 0) throw ParameterError("potential must have inf V > 0");
  }
  if (kind == Kind::radial_table) {
    if (table_r.size() < 2 || table_r.size() != table_V.size())
      throw ParameterError("radial_table needs >= 2 matching (r, V) samples");
    if (!std::is_sorted(table_r.begin(), table_r.end()))
      throw ParameterError("radial_table radii must increase");
    for (double v : table_V)
      if (!(v > 0)) throw ParameterError("radial_table values must be positive");
  }
}

void Params::validate() const {
  pot.validate();
  if (d < 1) throw ParameterError("dimension must be >= 1");
  if (ell < 1) throw ParameterError("ell must be >= 1");
  if (m <= 0 || m % 2) throw ParameterError("m must be a positive even integer");
  if (!(p > 1)) throw ParameterError("p must exceed 1");
  if (d >= 3 && !(p < double(d) / (d - 2)))
    throw ParameterError("p must be subcritical: p < d/(d-2)");
  if (beta > 0) throw ParameterError("beta > 0 (cooperative) is not supported");
}

void SystemState::validate() const {
  if (u.empty()) throw ParameterError("state has no components");
  for (const Field& f : u)
    if (!(f.grid == u.front().grid)) throw ParameterError("components must share one grid");
}

std::vector<double> sample_potential(const PotentialSpec& pot, const Grid& g) {
  std::vector<double> V(g.size());
  for (std::size_t k = 0; k < V.size(); ++k) {
    auto x = g.point(k);
    V[k] = pot(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    if (!(V[k] > 0)) throw ParameterError("potential violates inf V > 0 on the grid");
  }
  return V;
}

}  // namespace pinwheel
