#pragma once

// Arithmetic of the first Heisenberg group H = (R^3, .) with
//   (x, y, z) . (x', y', z') = (x + x', y + y', z + z' + (x y' - x' y) / 2).

#include <array>
#include <cmath>

namespace hconv {

struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Coordinates (a, b) of the horizontal element (a, b, 0) used to
/// parametrize horizontal planes.
struct PlaneCoord {
  double a = 0.0;
  double b = 0.0;

  friend bool operator==(const PlaneCoord&, const PlaneCoord&) = default;
};

/// Rows are the coefficient vectors of the left-invariant fields
/// X = d/dx - (y/2) d/dz and Y = d/dy + (x/2) d/dz at a point.
struct HorizontalFrame {
  std::array<std::array<double, 3>, 2> rows{};
};

inline bool is_finite(const Point& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline Point group_mul(const Point& p, const Point& q) {
  return {p.x + q.x, p.y + q.y, p.z + q.z + 0.5 * (p.x * q.y - q.x * p.y)};
}

inline Point group_inverse(const Point& p) { return {-p.x, -p.y, -p.z}; }

/// Koranyi gauge ((x^2 + y^2)^2 + 16 z^2)^(1/4).
inline double gauge_norm(const Point& p) {
  const double r2 = p.x * p.x + p.y * p.y;
  return std::sqrt(std::sqrt(r2 * r2 + 16.0 * p.z * p.z));
}

inline double euclidean_norm(const Point& p) {
  return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
}

inline Point horizontal(const PlaneCoord& h) { return {h.a, h.b, 0.0}; }

/// p . (a, b, 0): a point of the left-invariant horizontal plane through p.
inline Point left_plane_point(const Point& p, const PlaneCoord& h) {
  return group_mul(p, horizontal(h));
}

/// (a, b, 0) . p: a point of the right-invariant horizontal plane through p.
inline Point right_plane_point(const Point& p, const PlaneCoord& h) {
  return group_mul(horizontal(h), p);
}

/// Zero iff q lies on the left-invariant horizontal plane through p.
inline double plane_residual_left(const Point& p, const Point& q) {
  return p.y * q.x - p.x * q.y + 2.0 * q.z - 2.0 * p.z;
}

/// Zero iff q lies on the right-invariant horizontal plane through p.
inline double plane_residual_right(const Point& p, const Point& q) {
  return p.y * q.x - p.x * q.y - 2.0 * q.z + 2.0 * p.z;
}

inline HorizontalFrame horizontal_frame(const Point& p) {
  HorizontalFrame m;
  m.rows[0] = {1.0, 0.0, -0.5 * p.y};
  m.rows[1] = {0.0, 1.0, 0.5 * p.x};
  return m;
}

/// Reflection through the z-axis, (x, y, z) -> (-x, -y, z).
inline Point reflect_z(const Point& p) { return {-p.x, -p.y, p.z}; }

enum class Side { left, right };

inline Point plane_point(Side side, const Point& p, const PlaneCoord& h) {
  return side == Side::left ? left_plane_point(p, h) : right_plane_point(p, h);
}

inline double plane_residual(Side side, const Point& p, const Point& q) {
  return side == Side::left ? plane_residual_left(p, q) : plane_residual_right(p, q);
}

}  // namespace hconv
