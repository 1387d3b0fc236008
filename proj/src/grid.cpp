#include "pinwheel/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "pinwheel/errors.hpp"
#include "pinwheel/numerics.hpp"

namespace pinwheel {

Grid Grid::centered(int d, int n, double half_width) {
  return centered(d, {n, n, n}, {half_width, half_width, half_width});
}

Grid Grid::centered(int d, std::array<int, 3> n, std::array<double, 3> half_width) {
  if (d < 1 || d > 3) throw ParameterError("grid dimension must be 1, 2 or 3");
  Grid g;
  g.d = d;
  for (int a = 0; a < 3; ++a) {
    if (a >= d) {
      g.n[a] = 1; g.h[a] = 1.0; g.lo[a] = 0.0;
      continue;
    }
    if (n[a] < 3 || !(half_width[a] > 0)) throw ParameterError("grid needs n >= 3 and L > 0");
    g.n[a] = n[a];
    g.h[a] = 2.0 * half_width[a] / (n[a] + 1);
    g.lo[a] = -0.5 * (n[a] - 1) * g.h[a];
  }
  return g;
}

std::size_t Grid::size() const { return std::size_t(n[0]) * n[1] * n[2]; }

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < d; ++a) v *= h[a];
  return v;
}

double Grid::domain_measure() const {
  double v = 1.0;
  for (int a = 0; a < d; ++a) v *= (n[a] + 1) * h[a];
  return v;
}

std::array<double, 3> Grid::point(std::size_t idx) const {
  std::array<double, 3> x{0, 0, 0};
  std::size_t k2 = idx % n[2], rest = idx / n[2];
  std::size_t k1 = rest % n[1], k0 = rest / n[1];
  x[0] = coord(0, int(k0));
  if (d > 1) x[1] = coord(1, int(k1));
  if (d > 2) x[2] = coord(2, int(k2));
  return x;
}

bool Grid::origin_centered(double tol) const {
  for (int a = 0; a < d; ++a)
    if (std::abs(lo[a] + 0.5 * (n[a] - 1) * h[a]) > tol * (1 + std::abs(lo[a]))) return false;
  return true;
}

bool Grid::square(double tol) const {
  if (d < 2) return true;
  return n[0] == n[1] && std::abs(h[0] - h[1]) <= tol * h[0];
}

bool Grid::operator==(const Grid& o) const {
  return d == o.d && n == o.n && h == o.h && lo == o.lo;
}

void write_field(std::ostream& os, const Field& f, DumpFormat fmt) {
  const Grid& g = f.grid;
  std::ostringstream hdr;
  hdr.precision(17);
  hdr << g.d;
  for (int a = 0; a < g.d; ++a) hdr << ' ' << g.n[a];
  for (int a = 0; a < g.d; ++a) hdr << ' ' << g.h[a];
  for (int a = 0; a < g.d; ++a) hdr << ' ' << g.lo[a];
  os << hdr.str() << '\n';
  if (fmt == DumpFormat::text) {
    char buf[32];
    for (double x : f.v) {
      std::snprintf(buf, sizeof buf, "%.17g\n", x);
      os << buf;
    }
  } else {
    // Raw little-endian doubles (host order on all supported targets).
    os.write(reinterpret_cast<const char*>(f.v.data()), std::streamsize(f.v.size() * sizeof(double)));
  }
}

Field read_field(std::istream& is, DumpFormat fmt) {
  std::string line;
  if (!std::getline(is, line)) throw ParameterError("field dump: missing header");
  std::istringstream hdr(line);
  Grid g;
  hdr >> g.d;
  if (!hdr || g.d < 1 || g.d > 3) throw ParameterError("field dump: bad dimension");
  for (int a = 0; a < g.d; ++a) hdr >> g.n[a];
  for (int a = 0; a < g.d; ++a) hdr >> g.h[a];
  for (int a = 0; a < g.d; ++a) hdr >> g.lo[a];
  if (!hdr) throw ParameterError("field dump: malformed header");
  Field f(g);
  if (fmt == DumpFormat::text) {
    for (double& x : f.v)
      if (!(is >> x)) throw ParameterError("field dump: truncated values");
  } else {
    is.read(reinterpret_cast<char*>(f.v.data()), std::streamsize(f.v.size() * sizeof(double)));
    if (!is) throw ParameterError("field dump: truncated values");
  }
  return f;
}

double l2_dot(const Field& a, const Field& b) {
  return a.grid.cell_volume() *
         pairwise_sum_fn(0, a.size(), [&](std::size_t k) { return a.v[k] * b.v[k]; });
}

double l2_norm(const Field& a) { return std::sqrt(l2_dot(a, a)); }

}  // namespace pinwheel
