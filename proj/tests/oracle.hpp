#pragma once

// Exhaustive reference for the plane lattice LP: the minimum of
// sum c_i v(q_i) over all feasible singletons, pairs and triples of lattice
// points q_i = (a_i, b_i) with sum c_i q_i = 0, c >= 0, sum c = 1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hconv/convexify.hpp"

namespace hconv::testing {

struct LatticePoint {
  double a;
  double b;
  double v;
};

inline std::vector<LatticePoint> plane_lattice_values(const ScalarField& f, const Point& p,
                                                      Side side, const WindowSpec& w) {
  const int c = (w.samples_per_axis - 1) / 2;
  const double h = w.spacing();
  std::vector<LatticePoint> pts;
  for (int j = -c; j <= c; ++j) {
    for (int i = -c; i <= c; ++i) {
      const double a = i * h;
      const double b = j * h;
      pts.push_back({a, b, f(plane_point(side, p, {a, b}))});
    }
  }
  return pts;
}

inline double brute_force_plane_min(const std::vector<LatticePoint>& pts) {
  double best = std::numeric_limits<double>::infinity();
  const double eps = 1e-12;
  for (const auto& q : pts) {
    if (std::abs(q.a) < eps && std::abs(q.b) < eps) best = std::min(best, q.v);
  }
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& u = pts[i];
      const auto& v = pts[j];
      // Origin on the open segment uv: collinear and opposite.
      const double cross = u.a * v.b - u.b * v.a;
      const double dot = u.a * v.a + u.b * v.b;
      if (std::abs(cross) > eps || !(dot < 0.0)) continue;
      const double nu = std::hypot(u.a, u.b);
      const double nv = std::hypot(v.a, v.b);
      const double wu = nv / (nu + nv);
      best = std::min(best, wu * u.v + (1.0 - wu) * v.v);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto& p1 = pts[i];
        const auto& p2 = pts[j];
        const auto& p3 = pts[k];
        // Barycentric coordinates of the origin.
        const double det = (p2.a - p1.a) * (p3.b - p1.b) - (p3.a - p1.a) * (p2.b - p1.b);
        if (std::abs(det) < eps) continue;
        const double l2 = ((-p1.a) * (p3.b - p1.b) - (p3.a - p1.a) * (-p1.b)) / det;
        const double l3 = ((p2.a - p1.a) * (-p1.b) - (-p1.a) * (p2.b - p1.b)) / det;
        const double l1 = 1.0 - l2 - l3;
        if (l1 < -eps || l2 < -eps || l3 < -eps) continue;
        best = std::min(best, l1 * p1.v + l2 * p2.v + l3 * p3.v);
      }
    }
  }
  return best;
}

}  // namespace hconv::testing
