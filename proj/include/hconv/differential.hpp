#pragma once

// Horizontal derivatives by finite differences along group lines
// t -> p.(t e, 0) (left) or t -> (t e, 0).p (right), and sampled
// h-convexity tests.

#include <cstdint>
#include <utility>

#include "hconv/fields.hpp"
#include "hconv/heisenberg.hpp"

namespace hconv {

inline constexpr double kDefaultStep = 1e-2;

struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  double trace() const { return a11 + a22; }
  double least_eigenvalue() const;
  double greatest_eigenvalue() const;
};

struct Gradient2 {
  double x = 0.0;
  double y = 0.0;
};

/// (Xu, Yu) at p.
Gradient2 horizontal_gradient(const ScalarField& f, const Point& p, double step = kDefaultStep);

/// (X^2 u, (XY + YX) u / 2, Y^2 u) at p. The cross term comes from the
/// diagonal line: d^2/dt^2 u(p.(t, t, 0)) = (X + Y)^2 u.
Sym2 symmetrized_horizontal_hessian(const ScalarField& f, const Point& p,
                                    double step = kDefaultStep);

Gradient2 right_horizontal_gradient(const ScalarField& f, const Point& p,
                                    double step = kDefaultStep);
Sym2 right_symmetrized_hessian(const ScalarField& f, const Point& p, double step = kDefaultStep);

Gradient2 horizontal_gradient(Side side, const ScalarField& f, const Point& p, double step);
Sym2 symmetrized_hessian(Side side, const ScalarField& f, const Point& p, double step);

double least_horizontal_eigenvalue(const ScalarField& f, const Point& p,
                                   double step = kDefaultStep);

/// f(p.h) + f(p.h^-1) - 2 f(p); nonnegative for h-convex f.
double midpoint_check(const ScalarField& f, const Point& p, const PlaneCoord& h);

/// Same with h.p and h^-1.p.
double right_midpoint_check(const ScalarField& f, const Point& p, const PlaneCoord& h);

struct ConvexityReport {
  bool pass = true;
  Point worst_point;
  double worst_value = 0.0;
  int samples_checked = 0;
  /// "midpoint" or "eigenvalue": which test produced worst_value.
  const char* worst_test = "eigenvalue";
  /// Samples whose FD Hessian was unstable (a kink); only the midpoint test
  /// applies there.
  int kink_samples = 0;
};

struct ScanOptions {
  double h_radius = 1.0;
  int n_samples = 2000;
  double tol = 1e-6;
  double step = kDefaultStep;
  std::uint64_t seed = 1234;
  Side side = Side::left;
};

/// True when the FD Hessian changes by more than half of its size between
/// steps `step`, `step * ratio` and `step * ratio^2`: at a kink the pointwise
/// eigenvalue is meaningless. Grid-backed fields need ratio > 1, since below
/// the cell size every node of a trilinear interpolant looks like a kink.
bool hessian_is_unstable(Side side, const ScalarField& f, const Point& p, double step,
                         double ratio = 0.5);

/// Samples p uniformly in `region` and h uniformly in the disc of radius
/// h_radius; fails when a midpoint defect or a least eigenvalue (at samples
/// where the Hessian is stable) is below -tol. The worst offender is the minimum over both tests, ties broken by
/// lexicographic point order.
ConvexityReport hconvexity_scan(const ScalarField& f, const Box& region, const ScanOptions& opts);

}  // namespace hconv
