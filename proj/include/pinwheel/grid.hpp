#pragma once
#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pinwheel {

// Origin-centered, cell-interior tensor grid; Dirichlet ghosts sit at +-half_width.
struct Grid {
  int d = 1;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> h{1.0, 1.0, 1.0};
  std::array<double, 3> lo{0.0, 0.0, 0.0};  // coordinate of node 0 per axis

  static Grid centered(int d, int n, double half_width);
  static Grid centered(int d, std::array<int, 3> n, std::array<double, 3> half_width);

  std::size_t size() const;
  double cell_volume() const;
  double coord(int axis, int k) const { return lo[axis] + k * h[axis]; }
  std::array<double, 3> point(std::size_t idx) const;
  bool origin_centered(double tol = 1e-12) const;
  bool square(double tol = 1e-12) const;  // axes 0 and 1 identical
  double half_width(int axis) const { return (n[axis] + 1) * h[axis] / 2.0; }
  double domain_measure() const;
  bool operator==(const Grid& o) const;
};

struct Field {
  Grid grid;
  std::vector<double> v;
  std::vector<std::string> warnings;
  bool g_invariant = false;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}
  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t k) { return v[k]; }
  double operator[](std::size_t k) const { return v[k]; }
};

enum class DumpFormat { text, binary };

void write_field(std::ostream& os, const Field& f, DumpFormat fmt);
Field read_field(std::istream& is, DumpFormat fmt);

// Discrete L^2 inner product (midpoint rule, pairwise summation).
double l2_dot(const Field& a, const Field& b);
double l2_norm(const Field& a);

}  // namespace pinwheel
