#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pinwheel {

enum class GroupMode { paper, analog };

struct IsometryTag {
  enum class Kind { theta, rho, analog_rot, composed } kind = Kind::composed;
  int order = 0;       // m or ell
  int index = 0;       // j or n
  double angle = 0.0;  // planar angle for analog rotations
};

struct Isometry {
  Eigen::MatrixXd matrix;
  IsometryTag tag;

  int dim() const { return int(matrix.rows()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix * x; }
  Isometry operator*(const Isometry& o) const;
  Isometry inverse() const;
  double orthogonality_defect() const;
};

struct GroupSpec {
  int m = 2;
  int ell = 2;
  GroupMode mode = GroupMode::paper;
  int dim = 4;             // ambient N in paper mode, d in analog mode
  bool orthogonal_y = false;  // O(N-4) invariance flag, realized as y-radial fields

  void validate() const;
};

Isometry theta_action(int m, int j, int dim, GroupMode mode = GroupMode::paper);
Isometry rho_action(int ell, int n, int dim, GroupMode mode = GroupMode::paper);

// The C^2 map tau(z1, z2) = (-conj z2, conj z1) as a real 4x4 matrix.
Eigen::Matrix4d tau_matrix();

struct OrbitSet {
  std::vector<Eigen::VectorXd> points;
  std::vector<std::pair<int, int>> labels;  // (component i, group index j)
};

OrbitSet orbit_points(const Eigen::VectorXd& base, const GroupSpec& spec);

struct OrbitDistances {
  double intra = 0;  // min over fixed i, j != k
  double inter = 0;  // min over i != n, all j, k
};
OrbitDistances orbit_distances(const OrbitSet& orbit);

struct SeparationConstants {
  double intra = 0, inter = 0;
  bool existence_ok = false, strong_ok = false;
};
SeparationConstants separation_constants(int m, int ell);

}  // namespace pinwheel
