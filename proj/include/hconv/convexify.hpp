#pragma once

// Pointwise convexification operators realized as lattice linear programs:
//
//   S[u](p)       inf sum c_i u(p_i),  p_i on the left horizontal plane of p
//   S~[u](p)      same on the right-invariant plane
//   S~_eps[u](p)  p_i anywhere, plus (1/eps) * W~ penalizing the distance of
//                 p_i from the right plane of p
//   Gamma_E[u](p) Euclidean pointwise envelope (p_i anywhere)
//
// subject to c_i >= 0, sum c_i = 1, sum c_i p_i = p. Candidates are sampled
// on a lattice centred at p; a basic optimal solution of the LP has at most
// as many positive weights as equality rows (3 on a plane, 4 in space).

#include <cstddef>
#include <optional>
#include <vector>

#include "hconv/fields.hpp"
#include "hconv/heisenberg.hpp"

namespace hconv {

enum class CombinationKind { left_plane, right_plane, penalized_right, euclidean };

const char* to_string(CombinationKind kind);

struct ConvexCombination {
  CombinationKind kind = CombinationKind::left_plane;
  Point query;
  std::vector<double> weights;
  /// Plane coordinates of the support points (plane variants only).
  std::vector<PlaneCoord> coords;
  std::vector<Point> points;
  /// sum c_i u(p_i) + penalty.
  double value = 0.0;
  /// (1/eps) * sum c_i g~(p, p_i)^2 for the penalized variant, else 0.
  double penalty = 0.0;
  /// Outer search radius and base lattice spacing that produced this result.
  double radius = 0.0;
  double spacing = 0.0;
  int pivots = 0;
  /// Support still touched the window boundary but dropping the outer ring
  /// raised the value by at most GrowthPolicy::stall_tolerance.
  bool window_limited = false;
};

/// Square (plane) or cube (space) lattice of candidates centred at the query
/// point: samples_per_axis points per axis spanning [-radius, radius].
struct WindowSpec {
  double radius = 4.0;
  int samples_per_axis = 41;

  double spacing() const { return 2.0 * radius / (samples_per_axis - 1); }
  /// Throws std::invalid_argument unless radius > 0 and samples_per_axis is
  /// odd and >= 5.
  void validate() const;
};

struct GrowthPolicy {
  /// Window doublings attempted when an optimal support point sits on the
  /// window boundary.
  int max_doublings = 6;
  /// Doubling keeps the lattice spacing (the old lattice nests in the new
  /// one) while samples_per_axis stays below this cap; past it the spacing
  /// doubles instead.
  int max_samples_plane = 641;
  int max_samples_space = 81;
  /// A boundary-touching solution is accepted as is when re-solving without
  /// the outer ring of the lattice raises the value by at most this much.
  /// Zero keeps the strict rule, under which an infimum approached only at
  /// infinity ends in WindowTooSmall.
  double stall_tolerance = 0.0;
  /// Plane variants only: coarse rings at radii R 2^k, k = 1..far_rings,
  /// each with the window's sample count, appended to the lattice. They let
  /// the LP reach combinations far outside the window even when the
  /// windowed optimum is interior (no boundary contact to trigger growth).
  /// The outermost ring is then the window boundary.
  int far_rings = 0;
};

/// v_p(a, b) = f(p.(a, b, 0)).
ScalarField::Eval restrict_to_left_plane(const ScalarField& f, const Point& p);
/// v_p(a, b) = f((a, b, 0).p).
ScalarField::Eval restrict_to_right_plane(const ScalarField& f, const Point& p);

/// One LP on a fixed plane lattice, no window growth.
ConvexCombination plane_lattice_convexify(const ScalarField& f, const Point& p, Side side,
                                          const WindowSpec& w);

ConvexCombination s_point(const ScalarField& f, const Point& p, const WindowSpec& w,
                          const GrowthPolicy& growth = {});
ConvexCombination s_tilde_point(const ScalarField& f, const Point& p, const WindowSpec& w,
                                const GrowthPolicy& growth = {});
ConvexCombination s_side_point(Side side, const ScalarField& f, const Point& p,
                               const WindowSpec& w, const GrowthPolicy& growth = {});

/// Penalized right convexification; eps > 0.
ConvexCombination s_tilde_eps_point(const ScalarField& f, const Point& p, double eps,
                                    const WindowSpec& w3, const GrowthPolicy& growth = {});

ConvexCombination euclid_envelope_point(const ScalarField& f, const Point& p,
                                        const WindowSpec& w3, const GrowthPolicy& growth = {});

/// Smallest multiple R of 1/8 with c1 (R - |(x_p, y_p)|)^k - c2 > f(p):
/// beyond it every plane point exceeds f(p). An explicit radius is passed
/// through unchanged. Throws NoCertificate when neither a superlinear
/// certificate nor an explicit radius is available.
WindowSpec choose_window(const ScalarField& f, const Point& p, int samples_per_axis = 41,
                         std::optional<double> explicit_radius = std::nullopt);

/// W~ evaluated literally from its weighted-sum definition,
///   g~_i = (sum c y) x_i - (sum c x) y_i - 2 z_i + 2 sum c z,
///   W~   = sum c_i g~_i^2,
/// for cross-checking the per-point decoupling used by s_tilde_eps_point.
double penalty_w_tilde(const std::vector<double>& weights, const std::vector<Point>& points);

/// Euclidean combination sum c_i p_i.
Point barycenter(const std::vector<double>& weights, const std::vector<Point>& points);

}  // namespace hconv
