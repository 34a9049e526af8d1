#include "hconv/convexify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hconv/errors.hpp"
#include "hconv/lp.hpp"
#include "hconv/simd/kernels.hpp"

namespace hconv {

namespace {

constexpr double kPruneWeight = 1e-13;

// Internal lattices may be smaller than what WindowSpec::validate accepts
// (the interior re-solve drops one ring).
//
// Plane lattices may carry coarse outer rings: ring k holds the points of
// the lattice scaled by 2^k whose index norm lies in (half/2, half], with
// the outermost ring cut to `outer_half`. The outermost layer present is
// the boundary.
struct Lattice {
  double radius = 0.0;
  int n = 0;
  int rings = 0;
  int outer_half = -1;  // -1: half()

  double spacing() const { return 2.0 * radius / (n - 1); }
  int half() const { return (n - 1) / 2; }
  int outermost_half() const { return outer_half < 0 ? half() : outer_half; }
  double outer_radius() const { return std::ldexp(outermost_half() * spacing(), rings); }

  // The same lattice without its boundary layer.
  Lattice without_boundary() const {
    if (rings == 0) return {radius - spacing(), n - 2};
    Lattice inner = *this;
    inner.outer_half = outermost_half() - 1;
    if (2 * inner.outer_half <= half()) {
      --inner.rings;
      inner.outer_half = -1;
    }
    return inner;
  }
};

// Column storage reused across calls on the same thread.
struct Columns {
  std::vector<double> cost;
  std::vector<double> ones;
  std::vector<double> d0;
  std::vector<double> d1;
  std::vector<double> d2;
  std::vector<double> residual;

  void resize(std::size_t n, bool space) {
    cost.resize(n);
    ones.assign(n, 1.0);
    d0.resize(n);
    d1.resize(n);
    if (space) {
      d2.resize(n);
      residual.resize(n);
    }
  }
};

Columns& thread_columns() {
  thread_local Columns cols;
  return cols;
}

struct LatticeSolution {
  ConvexCombination combo;
  bool touches_boundary = false;
};

double value_slack(double v) { return 1e-12 * std::max(1.0, std::abs(v)); }

LatticeSolution solve_plane(const ScalarField& f, const Point& p, Side side, const Lattice& lat) {
  const int n = lat.n;
  const int c = lat.half();
  const double h = lat.spacing();
  const std::size_t base = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  // Ring columns follow the base lattice; `ring_layer` marks those on the
  // boundary layer.
  std::vector<std::array<int, 3>> ring_points;  // i, j, k
  for (int r = 1; r <= lat.rings; ++r) {
    const int lim = r == lat.rings ? lat.outermost_half() : c;
    for (int j = -lim; j <= lim; ++j) {
      for (int i = -lim; i <= lim; ++i) {
        if (2 * std::max(std::abs(i), std::abs(j)) > c) ring_points.push_back({i, j, r});
      }
    }
  }
  const std::size_t count = base + ring_points.size();
  Columns& cols = thread_columns();
  cols.resize(count, false);
  for (int j = 0; j < n; ++j) {
    const double b = (j - c) * h;
    for (int i = 0; i < n; ++i) {
      const double a = (i - c) * h;
      const std::size_t k = static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * static_cast<std::size_t>(j);
      cols.d0[k] = a;
      cols.d1[k] = b;
      cols.cost[k] = f(plane_point(side, p, {a, b}));
    }
  }
  for (std::size_t r = 0; r < ring_points.size(); ++r) {
    const auto [i, j, k] = ring_points[r];
    const double a = std::ldexp(i * h, k);
    const double b = std::ldexp(j * h, k);
    cols.d0[base + r] = a;
    cols.d1[base + r] = b;
    cols.cost[base + r] = f(plane_point(side, p, {a, b}));
  }
  const auto on_boundary = [&](std::size_t k) {
    if (k >= base) {
      const auto [i, j, r] = ring_points[k - base];
      return r == lat.rings && std::max(std::abs(i), std::abs(j)) == lat.outermost_half();
    }
    if (lat.rings > 0) return false;
    const int i = static_cast<int>(k % static_cast<std::size_t>(n));
    const int j = static_cast<int>(k / static_cast<std::size_t>(n));
    return std::abs(i - c) == c || std::abs(j - c) == c;
  };
  const auto col = [n](int i, int j) {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n) * static_cast<std::size_t>(j);
  };
  // The singleton at the centre is feasible; two zero-level neighbours
  // complete a nonsingular starting basis.
  const std::array<std::size_t, 3> start{col(c, c), col(c + 1, c), col(c, c + 1)};
  const std::array<const double*, 3> rows{cols.ones.data(), cols.d0.data(), cols.d1.data()};
  const std::array<double, 3> rhs{1.0, 0.0, 0.0};
  const lp::Solution sol =
      lp::solve({cols.cost, rows, rhs}, start);

  std::vector<std::pair<std::size_t, double>> support;
  for (std::size_t s = 0; s < sol.basis.size(); ++s) {
    if (sol.basic_values[s] > kPruneWeight) support.emplace_back(sol.basis[s], sol.basic_values[s]);
  }
  std::sort(support.begin(), support.end());

  LatticeSolution out;
  ConvexCombination& cc = out.combo;
  cc.kind = side == Side::left ? CombinationKind::left_plane : CombinationKind::right_plane;
  cc.query = p;
  cc.radius = lat.outer_radius();
  cc.spacing = h;
  cc.pivots = sol.pivots;
  cc.value = 0.0;
  for (const auto& [k, w] : support) {
    if (on_boundary(k)) out.touches_boundary = true;
    const PlaneCoord hc{cols.d0[k], cols.d1[k]};
    cc.weights.push_back(w);
    cc.coords.push_back(hc);
    cc.points.push_back(plane_point(side, p, hc));
    cc.value += w * cols.cost[k];
  }
  return out;
}

LatticeSolution solve_space(const ScalarField& f, const Point& p, std::optional<double> eps,
                            const Lattice& lat) {
  const int n = lat.n;
  const int c = lat.half();
  const double h = lat.spacing();
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::size_t count = nn * nn * nn;
  Columns& cols = thread_columns();
  cols.resize(count, true);
  std::vector<double> raw(count);
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i) + nn * (static_cast<std::size_t>(j) + nn * static_cast<std::size_t>(l));
        const Point d{(i - c) * h, (j - c) * h, (l - c) * h};
        const Point q{p.x + d.x, p.y + d.y, p.z + d.z};
        cols.d0[k] = d.x;
        cols.d1[k] = d.y;
        cols.d2[k] = d.z;
        raw[k] = f(q);
        cols.residual[k] = plane_residual_right(p, q);
      }
    }
  }
  // Under sum c_i q_i = p the weighted sums inside g~_i are the coordinates
  // of p, so g~_i = plane_residual_right(p, q_i) and the penalty
  // (1/eps) sum c_i g~_i^2 is linear in the weights.
  if (eps) {
    simd::add_weighted_square(raw, cols.residual, 1.0 / *eps, cols.cost);
  } else {
    std::copy(raw.begin(), raw.end(), cols.cost.begin());
  }
  const auto col = [nn](int i, int j, int l) {
    return static_cast<std::size_t>(i) + nn * (static_cast<std::size_t>(j) + nn * static_cast<std::size_t>(l));
  };
  const std::array<std::size_t, 4> start{col(c, c, c), col(c + 1, c, c), col(c, c + 1, c),
                                         col(c, c, c + 1)};
  const std::array<const double*, 4> rows{cols.ones.data(), cols.d0.data(), cols.d1.data(),
                                          cols.d2.data()};
  const std::array<double, 4> rhs{1.0, 0.0, 0.0, 0.0};
  const lp::Solution sol = lp::solve({cols.cost, rows, rhs}, start);

  std::vector<std::pair<std::size_t, double>> support;
  for (std::size_t s = 0; s < sol.basis.size(); ++s) {
    if (sol.basic_values[s] > kPruneWeight) support.emplace_back(sol.basis[s], sol.basic_values[s]);
  }
  std::sort(support.begin(), support.end());

  LatticeSolution out;
  ConvexCombination& cc = out.combo;
  cc.kind = eps ? CombinationKind::penalized_right : CombinationKind::euclidean;
  cc.query = p;
  cc.radius = lat.radius;
  cc.spacing = h;
  cc.pivots = sol.pivots;
  double base = 0.0;
  double penalty = 0.0;
  for (const auto& [k, w] : support) {
    const int i = static_cast<int>(k % nn);
    const int j = static_cast<int>((k / nn) % nn);
    const int l = static_cast<int>(k / (nn * nn));
    if (std::abs(i - c) == c || std::abs(j - c) == c || std::abs(l - c) == c) {
      out.touches_boundary = true;
    }
    cc.weights.push_back(w);
    cc.points.push_back({p.x + cols.d0[k], p.y + cols.d1[k], p.z + cols.d2[k]});
    base += w * raw[k];
    if (eps) penalty += w * cols.residual[k] * cols.residual[k] / *eps;
  }
  cc.penalty = penalty;
  cc.value = base + penalty;
  return out;
}

// Window growth shared by the plane and space variants. A boundary-touching
// optimum is accepted when dropping the outer ring does not raise the value
// (ties between boundary and interior optima); otherwise the window grows.
template <typename Solve>
ConvexCombination grow_and_solve(const Point& p, const WindowSpec& w, int sample_cap,
                                 const GrowthPolicy& growth, int rings, Solve&& solve) {
  Lattice lat{w.radius, w.samples_per_axis, rings};
  for (int attempt = 0;; ++attempt) {
    LatticeSolution full = solve(lat);
    if (!full.touches_boundary) return std::move(full.combo);
    if (lat.n >= 5) {
      LatticeSolution inner = solve(lat.without_boundary());
      if (inner.combo.value <= full.combo.value + value_slack(full.combo.value)) {
        return std::move(inner.combo);
      }
      if (inner.combo.value - full.combo.value <= growth.stall_tolerance) {
        full.combo.window_limited = true;
        return std::move(full.combo);
      }
    }
    if (attempt >= growth.max_doublings) throw WindowTooSmall(p, lat.outer_radius());
    const int grown = 2 * (lat.n - 1) + 1;
    lat = grown <= sample_cap ? Lattice{2.0 * lat.radius, grown, rings}
                              : Lattice{2.0 * lat.radius, lat.n, rings};
  }
}

}  // namespace

const char* to_string(CombinationKind kind) {
  switch (kind) {
    case CombinationKind::left_plane:
      return "left_plane";
    case CombinationKind::right_plane:
      return "right_plane";
    case CombinationKind::penalized_right:
      return "penalized_right";
    case CombinationKind::euclidean:
      return "euclidean";
  }
  return "unknown";
}

void WindowSpec::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("window radius must be positive");
  }
  if (samples_per_axis < 5 || samples_per_axis % 2 == 0) {
    throw std::invalid_argument("window samples_per_axis must be odd and >= 5");
  }
}

ScalarField::Eval restrict_to_left_plane(const ScalarField& f, const Point& p) {
  return [f, p](const Point& h) { return f(left_plane_point(p, {h.x, h.y})); };
}

ScalarField::Eval restrict_to_right_plane(const ScalarField& f, const Point& p) {
  return [f, p](const Point& h) { return f(right_plane_point(p, {h.x, h.y})); };
}

ConvexCombination plane_lattice_convexify(const ScalarField& f, const Point& p, Side side,
                                          const WindowSpec& w) {
  w.validate();
  return solve_plane(f, p, side, Lattice{w.radius, w.samples_per_axis}).combo;
}

ConvexCombination s_side_point(Side side, const ScalarField& f, const Point& p,
                               const WindowSpec& w, const GrowthPolicy& growth) {
  w.validate();
  return grow_and_solve(p, w, growth.max_samples_plane, growth, growth.far_rings,
                        [&](const Lattice& lat) { return solve_plane(f, p, side, lat); });
}

ConvexCombination s_point(const ScalarField& f, const Point& p, const WindowSpec& w,
                          const GrowthPolicy& growth) {
  return s_side_point(Side::left, f, p, w, growth);
}

ConvexCombination s_tilde_point(const ScalarField& f, const Point& p, const WindowSpec& w,
                                const GrowthPolicy& growth) {
  return s_side_point(Side::right, f, p, w, growth);
}

ConvexCombination s_tilde_eps_point(const ScalarField& f, const Point& p, double eps,
                                    const WindowSpec& w3, const GrowthPolicy& growth) {
  if (!(eps > 0.0)) throw std::invalid_argument("penalty parameter eps must be positive");
  w3.validate();
  return grow_and_solve(p, w3, growth.max_samples_space, growth, 0,
                        [&](const Lattice& lat) { return solve_space(f, p, eps, lat); });
}

ConvexCombination euclid_envelope_point(const ScalarField& f, const Point& p,
                                        const WindowSpec& w3, const GrowthPolicy& growth) {
  w3.validate();
  return grow_and_solve(p, w3, growth.max_samples_space, growth, 0,
                        [&](const Lattice& lat) { return solve_space(f, p, std::nullopt, lat); });
}

WindowSpec choose_window(const ScalarField& f, const Point& p, int samples_per_axis,
                         std::optional<double> explicit_radius) {
  if (explicit_radius) {
    WindowSpec w{*explicit_radius, samples_per_axis};
    w.validate();
    return w;
  }
  const auto& cert = f.certificate();
  if (!cert || !cert->superlinear()) {
    throw NoCertificate("field '" + f.name() +
                        "' has no superlinear coercivity certificate; pass an explicit radius");
  }
  const double rho = std::hypot(p.x, p.y);
  const double target = f(p);
  // Radius where the minorant overtakes f(p), rounded up on a 1/8 grid.
  constexpr double quantum = 0.125;
  const double excess = (target + cert->c2) / cert->c1;
  const double r0 = rho + (excess > 0.0 ? std::pow(excess, 1.0 / cert->exponent) : 0.0);
  if (std::isfinite(r0)) {
    double r = (std::floor(r0 / quantum) + 1.0) * quantum;
    while (!(cert->c1 * std::pow(r - rho, cert->exponent) - cert->c2 > target)) r += quantum;
    WindowSpec w{r, samples_per_axis};
    w.validate();
    return w;
  }
  throw NoCertificate("no finite window radius satisfies the certificate bound");
}

double penalty_w_tilde(const std::vector<double>& weights, const std::vector<Point>& points) {
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    sx += weights[i] * points[i].x;
    sy += weights[i] * points[i].y;
    sz += weights[i] * points[i].z;
  }
  double w = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double g = sy * points[i].x - sx * points[i].y - 2.0 * points[i].z + 2.0 * sz;
    w += weights[i] * g * g;
  }
  return w;
}

Point barycenter(const std::vector<double>& weights, const std::vector<Point>& points) {
  Point b{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < weights.size(); ++i) {
    b.x += weights[i] * points[i].x;
    b.y += weights[i] * points[i].y;
    b.z += weights[i] * points[i].z;
  }
  return b;
}

}  // namespace hconv
