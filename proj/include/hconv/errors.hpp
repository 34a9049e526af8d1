#pragma once

#include <stdexcept>
#include <string>

#include "hconv/heisenberg.hpp"

namespace hconv {

/// An optimal support point of a convexification stayed on the boundary of
/// the search window after every allowed enlargement.
class WindowTooSmall : public std::runtime_error {
 public:
  WindowTooSmall(const Point& where, double last_radius)
      : std::runtime_error("convexification window too small at (" + std::to_string(where.x) +
                           ", " + std::to_string(where.y) + ", " + std::to_string(where.z) +
                           "), last radius " + std::to_string(last_radius)),
        point(where),
        radius(last_radius) {}

  Point point;
  double radius;
};

class NoCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoReference : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hconv
