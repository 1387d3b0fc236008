#include "pinwheel/groups.hpp"

#include <cmath>
#include <limits>

#include "pinwheel/errors.hpp"
#include "pinwheel/numerics.hpp"

namespace pinwheel {

namespace {

void require_even(int m) {
  if (m <= 0 || m % 2 != 0)
    throw ParameterError("group order m must be a positive even integer, got " +
                         std::to_string(m));
}

int wrap(int j, int m) { return ((j % m) + m) % m; }

Eigen::Matrix2d planar(double a) {
  Eigen::Matrix2d r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

Isometry analog_rotation(double angle, int dim, IsometryTag tag) {
  Isometry g;
  g.matrix = Eigen::MatrixXd::Identity(dim, dim);
  if (dim >= 2) g.matrix.topLeftCorner<2, 2>() = planar(angle);
  tag.angle = angle;
  g.tag = tag;
  return g;
}

}  // namespace

Isometry Isometry::operator*(const Isometry& o) const {
  Isometry r;
  r.matrix = matrix * o.matrix;
  r.tag.kind = IsometryTag::Kind::composed;
  return r;
}

Isometry Isometry::inverse() const {
  Isometry r;
  r.matrix = matrix.transpose();
  r.tag = tag;
  r.tag.index = -tag.index;
  r.tag.angle = -tag.angle;
  return r;
}

double Isometry::orthogonality_defect() const {
  auto e = matrix.transpose() * matrix - Eigen::MatrixXd::Identity(dim(), dim());
  return e.cwiseAbs().maxCoeff();
}

void GroupSpec::validate() const {
  require_even(m);
  if (ell < 2) throw ParameterError("ell must be >= 2");
  if (mode == GroupMode::paper) {
    if (dim < 4) throw ParameterError("paper mode needs N >= 4");
    if (orthogonal_y && dim == 5)
      throw ParameterError("O(N-4) flag requires N = 4 or N >= 6");
  } else if (dim < 1 || dim > 3) {
    throw ParameterError("analog mode needs d in {1,2,3}");
  }
}

Eigen::Matrix4d tau_matrix() {
  Eigen::Matrix4d t;
  t << 0, 0, -1, 0,
       0, 0, 0, 1,
       1, 0, 0, 0,
       0, -1, 0, 0;
  return t;
}

Isometry theta_action(int m, int j, int dim, GroupMode mode) {
  require_even(m);
  j = wrap(j, m);
  IsometryTag tag{IsometryTag::Kind::theta, m, j, 0.0};
  const double a = 2.0 * kPi * j / m;
  if (mode == GroupMode::analog) {
    if (dim == 1) {
      Isometry g;
      g.matrix = Eigen::MatrixXd::Constant(1, 1, j % 2 ? -1.0 : 1.0);
      g.tag = tag;
      g.tag.angle = (j % 2) * kPi;
      return g;
    }
    return analog_rotation(a, dim, tag);
  }
  if (dim < 4) throw ParameterError("theta_action: paper mode needs D >= 4");
  Isometry g;
  g.matrix = Eigen::MatrixXd::Identity(dim, dim);
  g.matrix.block<2, 2>(0, 0) = planar(a);
  g.matrix.block<2, 2>(2, 2) = planar(-a);
  g.tag = tag;
  return g;
}

Isometry rho_action(int ell, int n, int dim, GroupMode mode) {
  if (ell < 2) throw ParameterError("rho_action: ell must be >= 2");
  n = wrap(n, 2 * ell);
  IsometryTag tag{IsometryTag::Kind::rho, ell, n, 0.0};
  const double a = kPi * n / ell;
  if (mode == GroupMode::analog) {
    if (dim == 1) {
      Isometry g;
      g.matrix = Eigen::MatrixXd::Identity(1, 1);
      g.tag = tag;
      return g;
    }
    return analog_rotation(a, dim, tag);
  }
  if (dim < 4) throw ParameterError("rho_action: paper mode needs D >= 4");
  Isometry g;
  g.matrix = Eigen::MatrixXd::Identity(dim, dim);
  g.matrix.topLeftCorner<4, 4>() =
      std::cos(a) * Eigen::Matrix4d::Identity() + std::sin(a) * tau_matrix();
  g.tag = tag;
  return g;
}

OrbitSet orbit_points(const Eigen::VectorXd& base, const GroupSpec& spec) {
  spec.validate();
  if (base.size() != spec.dim) throw ParameterError("orbit_points: base has wrong dimension");
  if (base.norm() == 0.0) throw ParameterError("orbit_points: degenerate orbit (zero base)");
  OrbitSet o;
  for (int i = 0; i < spec.ell; ++i) {
    Eigen::MatrixXd ri = rho_action(spec.ell, -i, spec.dim, spec.mode).matrix;
    for (int j = 0; j < spec.m; ++j) {
      o.points.push_back(ri * (theta_action(spec.m, j, spec.dim, spec.mode).matrix * base));
      o.labels.emplace_back(i, j);
    }
  }
  return o;
}

OrbitDistances orbit_distances(const OrbitSet& orbit) {
  OrbitDistances d{std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()};
  for (std::size_t a = 0; a < orbit.points.size(); ++a)
    for (std::size_t b = a + 1; b < orbit.points.size(); ++b) {
      double dist = (orbit.points[a] - orbit.points[b]).norm();
      if (orbit.labels[a].first == orbit.labels[b].first)
        d.intra = std::min(d.intra, dist);
      else
        d.inter = std::min(d.inter, dist);
    }
  return d;
}

SeparationConstants separation_constants(int m, int ell) {
  require_even(m);
  if (ell < 1) throw ParameterError("ell must be positive");
  SeparationConstants s;
  s.intra = 2.0 * std::sin(kPi / m);
  s.inter = 2.0 * std::sin(kPi / (2.0 * ell));
  s.existence_ok = m > 2 * ell;
  s.strong_ok = s.intra < 0.5 * s.inter;
  return s;
}

}  // namespace pinwheel
