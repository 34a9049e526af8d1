#include "hconv/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "hconv/parallel.hpp"
#include "hconv/simd/kernels.hpp"

namespace hconv {

namespace {

GridField apply_from_source(const ScalarField& source, const GridField& nodes, const WindowSpec& w,
                            Side side, const ApplyOptions& opts, ApplyStats* stats) {
  w.validate();
  const bool adaptive =
      opts.adaptive_window && source.certificate() && source.certificate()->superlinear();

  GrowthPolicy growth = opts.growth;
  if (adaptive) growth.far_rings = 0;

  std::vector<double> next(nodes.size());
  std::vector<unsigned char> limited(nodes.size(), 0);
  parallel_for(nodes.size(), [&](std::size_t n) {
    const Point p = nodes.node_point(n);
    const WindowSpec win = adaptive ? choose_window(source, p, w.samples_per_axis) : w;
    const ConvexCombination c = s_side_point(side, source, p, win, growth);
    limited[n] = c.window_limited ? 1 : 0;
    // The centre singleton is always feasible, so v <= g up to rounding.
    next[n] = std::min(c.value, nodes.values()[n]);
  });
  if (stats) {
    stats->window_limited_nodes =
        static_cast<int>(std::count(limited.begin(), limited.end(), static_cast<unsigned char>(1)));
  }
  return nodes.with_values(std::move(next));
}

void check_finite(const GridField& g) {
  for (double v : g.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("apply_s: grid holds non-finite values");
  }
}

}  // namespace

GridField apply_s(const GridField& g, const WindowSpec& w, Side side, const ApplyOptions& opts,
                  ApplyStats* stats) {
  check_finite(g);
  const ScalarField source = as_scalar_field(std::make_shared<const GridField>(g), "iterate");
  return apply_from_source(source, g, w, side, opts, stats);
}

GridField apply_s(const ScalarField& f, const GridField& nodes, const WindowSpec& w, Side side,
                  const ApplyOptions& opts, ApplyStats* stats) {
  check_finite(nodes);
  return apply_from_source(f, nodes, w, side, opts, stats);
}

namespace {

void record_pass(EnvelopeReport& rep, const GridField& next, const GridField& current,
                 const ApplyStats& stats, const EnvelopeOptions& opts) {
  if (opts.keep_iterates) rep.iterates.push_back(next);
  rep.window_limited_nodes.push_back(stats.window_limited_nodes);
  rep.sup_deltas.push_back(simd::max_abs_diff(next.values(), current.values()));
  rep.max_increase.push_back(simd::max_diff(next.values(), current.values()));
  ++rep.passes;
}

void validate(const EnvelopeOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("iterate_envelope: tol must be positive");
  if (opts.max_iter < 1) throw std::invalid_argument("iterate_envelope: max_iter must be >= 1");
}

EnvelopeReport iterate_from(GridField current, EnvelopeReport rep, const EnvelopeOptions& opts) {
  while (!(rep.passes > 0 && rep.sup_deltas.back() < opts.tol) && rep.passes < opts.max_iter) {
    ApplyStats stats;
    GridField next = apply_s(current, opts.window, opts.side, opts.apply, &stats);
    record_pass(rep, next, current, stats, opts);
    current = std::move(next);
  }
  rep.converged = rep.passes > 0 && rep.sup_deltas.back() < opts.tol;
  rep.iterations = rep.converged ? std::max(1, rep.passes - 1) : rep.passes;
  rep.final = std::move(current);
  return rep;
}

}  // namespace

EnvelopeReport iterate_envelope(const ScalarField& f, const Box& box, Resolution res,
                                const EnvelopeOptions& opts) {
  validate(opts);
  const GridField initial = sample_to_grid(f, box, res);
  // The first application sees f itself rather than its interpolant.
  EnvelopeReport rep;
  ApplyStats stats;
  GridField first = apply_s(f, initial, opts.window, opts.side, opts.apply, &stats);
  record_pass(rep, first, initial, stats, opts);
  return iterate_from(std::move(first), std::move(rep), opts);
}

EnvelopeReport iterate_envelope(const GridField& initial, const EnvelopeOptions& opts) {
  validate(opts);
  return iterate_from(initial, EnvelopeReport{}, opts);
}

bool is_kink(const ScalarField& f, const Point& p, double step) {
  return hessian_is_unstable(Side::left, f, p, step);
}

bool is_grid_kink(const ScalarField& f, const Point& p, double step) {
  return hessian_is_unstable(Side::left, f, p, step, 2.0);
}

ObstacleResidual obstacle_residual(const GridField& env, const ScalarField& f,
                                   const ObstacleOptions& opts) {
  const double step = std::max(opts.step, 2.0 * env.max_spacing());
  auto shared = std::make_shared<const GridField>(env);
  const ScalarField v = as_scalar_field(shared, "envelope");

  struct NodeResult {
    bool interior = false;
    bool screened = false;
    double gap = 0.0;  // env - f
    double lambda = 0.0;
  };
  std::vector<NodeResult> out(env.size());
  parallel_for(env.size(), [&](std::size_t n) {
    if (!env.is_interior(n, opts.interior_margin)) return;
    NodeResult& r = out[n];
    r.interior = true;
    const Point p = env.node_point(n);
    r.gap = env.values()[n] - f(p);
    if (is_grid_kink(v, p, step)) {
      r.screened = true;
      return;
    }
    r.lambda = least_horizontal_eigenvalue(v, p, step);
  });

  ObstacleResidual res;
  res.residual = -std::numeric_limits<double>::infinity();
  res.above_obstacle = -std::numeric_limits<double>::infinity();
  res.concavity = -std::numeric_limits<double>::infinity();
  for (const NodeResult& r : out) {
    if (!r.interior) continue;
    res.above_obstacle = std::max(res.above_obstacle, r.gap);
    if (r.screened) {
      ++res.nodes_screened_out;
      continue;
    }
    ++res.nodes_checked;
    res.residual = std::max(res.residual, std::min(-r.lambda, r.gap));
    res.concavity = std::max(res.concavity, -r.lambda);
    if (-r.gap > opts.gap_threshold) {
      res.noncontact_curvature = std::max(res.noncontact_curvature, std::abs(r.lambda));
    }
  }
  return res;
}

CompareResult reference_compare(const GridField& env, const ScalarField& ref, int interior_margin) {
  CompareResult res;
  double sum = 0.0;
  for (std::size_t n = 0; n < env.size(); ++n) {
    if (!env.is_interior(n, interior_margin)) continue;
    const Point p = env.node_point(n);
    const double e = std::abs(env.values()[n] - ref(p));
    if (e > res.sup_error || res.nodes == 0) {
      res.sup_error = std::max(res.sup_error, e);
      if (e >= res.sup_error) res.worst_node = p;
    }
    sum += e;
    ++res.nodes;
  }
  res.mean_error = res.nodes > 0 ? sum / res.nodes : 0.0;
  return res;
}

}  // namespace hconv
