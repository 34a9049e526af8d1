#pragma once

// Iterated convexification S^n[u] on grid fields.

#include <optional>
#include <vector>

#include "hconv/convexify.hpp"
#include "hconv/differential.hpp"
#include "hconv/fields.hpp"

namespace hconv {

struct ApplyOptions {
  /// Per-node window from choose_window when the field carries a superlinear
  /// certificate; the WindowSpec radius is used otherwise.
  bool adaptive_window = true;
  /// Flat exterior directions of non-coercive fields let the lattice value
  /// creep down as the window grows; gains below the stall tolerance are
  /// not pursued (such nodes are counted, see ApplyStats). Far rings are
  /// dropped for fields whose certified window already confines the
  /// minimizers.
  GrowthPolicy growth{6, 641, 81, 1e-4, 4};
};

struct ApplyStats {
  int window_limited_nodes = 0;
};

/// Node-wise S (or S~) of the trilinear field `g`. The result has the same
/// geometry and never exceeds `g` at a node. WindowTooSmall propagates with
/// the offending node.
GridField apply_s(const GridField& g, const WindowSpec& w, Side side,
                  const ApplyOptions& opts = {}, ApplyStats* stats = nullptr);

/// Node-wise S (or S~) of `f` itself at the nodes of `nodes`, clipped by the
/// node values.
GridField apply_s(const ScalarField& f, const GridField& nodes, const WindowSpec& w, Side side,
                  const ApplyOptions& opts = {}, ApplyStats* stats = nullptr);

struct EnvelopeOptions {
  WindowSpec window{4.0, 41};
  Side side = Side::left;
  double tol = 1e-3;
  int max_iter = 50;
  ApplyOptions apply;
  /// Keep S^1, S^2, ... in EnvelopeReport::iterates.
  bool keep_iterates = false;
};

struct EnvelopeReport {
  /// Number of applications needed to reach the numerical fixed point:
  /// passes - 1 when the last pass only confirmed convergence, at least 1.
  int iterations = 0;
  /// Applications actually performed.
  int passes = 0;
  /// max over nodes |S^{n+1} - S^n| for each pass.
  std::vector<double> sup_deltas;
  /// max over nodes (S^{n+1} - S^n) for each pass; <= 0 for monotone iterates.
  std::vector<double> max_increase;
  bool converged = false;
  /// Nodes per pass whose result was window limited.
  std::vector<int> window_limited_nodes;
  GridField final;
  std::vector<GridField> iterates;
  std::optional<double> obstacle_residual;
};

/// The first application evaluates f itself on the planes; later ones the
/// trilinear interpolant of the previous iterate (with f outside the box).
EnvelopeReport iterate_envelope(const ScalarField& f, const Box& box, Resolution res,
                                const EnvelopeOptions& opts);

/// Same, from an already sampled grid (every application interpolates).
EnvelopeReport iterate_envelope(const GridField& initial, const EnvelopeOptions& opts);

struct ObstacleResidual {
  /// max over screened interior nodes of min(-lambda*, env - f); the obstacle
  /// characterization max{-lambda*, v - u} = 0 requires this to be <= 0.
  double residual = 0.0;
  /// max over interior nodes of env - f (envelope below the obstacle).
  double above_obstacle = 0.0;
  /// max over screened interior nodes of -lambda*.
  double concavity = 0.0;
  /// max over screened non-contact nodes (f - env > gap) of |lambda*|;
  /// the envelope is flat in the horizontal directions away from contact.
  double noncontact_curvature = 0.0;
  int nodes_checked = 0;
  int nodes_screened_out = 0;
};

struct ObstacleOptions {
  /// Finite-difference step; clamped to at least twice the grid spacing.
  double step = 0.0;
  int interior_margin = 2;
  double gap_threshold = 5e-2;
};

ObstacleResidual obstacle_residual(const GridField& env, const ScalarField& f,
                                   const ObstacleOptions& opts = {});

/// Left-side hessian_is_unstable: a kink, where pointwise FD says nothing.
bool is_kink(const ScalarField& f, const Point& p, double step);

/// Kink screen for a grid-backed field at a step of at least one cell:
/// compares the FD Hessian at step, 2 step and 4 step.
bool is_grid_kink(const ScalarField& f, const Point& p, double step);

struct CompareResult {
  double sup_error = 0.0;
  double mean_error = 0.0;
  int nodes = 0;
  Point worst_node;
};

/// Node-wise |env - ref| over nodes at least `interior_margin` cells from
/// the box faces.
CompareResult reference_compare(const GridField& env, const ScalarField& ref,
                                int interior_margin = 2);

}  // namespace hconv
