#include "hconv/lp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hconv/simd/kernels.hpp"

namespace hconv::lp {

namespace {

using Matrix = std::array<std::array<double, kMaxRows>, kMaxRows>;

// Gauss-Jordan inverse with partial pivoting; false when singular.
bool invert(Matrix a, std::size_t m, Matrix& inv) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) inv[i][j] = (i == j) ? 1.0 : 0.0;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-300) return false;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const double d = a[col][col];
    for (std::size_t j = 0; j < m; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col];
      for (std::size_t j = 0; j < m; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return true;
}

struct Basis {
  std::size_t m = 0;
  std::vector<std::size_t> cols;
  Matrix inv{};
  std::array<double, kMaxRows> x{};
};

// Rebuilds the inverse and the basic solution; false when singular.
bool refactor(const Problem& p, Basis& b) {
  Matrix mat{};
  for (std::size_t r = 0; r < b.m; ++r) {
    for (std::size_t i = 0; i < b.m; ++i) mat[r][i] = p.rows[r][b.cols[i]];
  }
  if (!invert(mat, b.m, b.inv)) return false;
  for (std::size_t i = 0; i < b.m; ++i) {
    double s = 0.0;
    for (std::size_t r = 0; r < b.m; ++r) s += b.inv[i][r] * p.rhs[r];
    b.x[i] = s;
  }
  return true;
}

}  // namespace

Solution solve(const Problem& p, std::span<const std::size_t> initial_basis,
               const Options& options) {
  const std::size_t m = p.rows.size();
  const std::size_t n = p.cost.size();
  if (m == 0 || m > kMaxRows || p.rhs.size() != m || initial_basis.size() != m) {
    throw std::invalid_argument("lp::solve: bad problem dimensions");
  }
  for (std::size_t c : initial_basis) {
    if (c >= n) throw std::invalid_argument("lp::solve: basis index out of range");
  }

  Basis b;
  b.m = m;
  b.cols.assign(initial_basis.begin(), initial_basis.end());
  if (!refactor(p, b)) throw std::invalid_argument("lp::solve: singular starting basis");
  for (std::size_t i = 0; i < m; ++i) {
    if (b.x[i] < -1e-9) throw std::invalid_argument("lp::solve: infeasible starting basis");
    b.x[i] = std::max(b.x[i], 0.0);
  }

  double scale = 1.0;
  for (double c : p.cost) scale = std::max(scale, std::abs(c));
  const double threshold = -options.optimality_tol * scale;

  Solution sol;
  int degenerate_run = 0;
  bool bland = false;
  std::array<double, kMaxRows> dual{};

  for (;;) {
    // Simplex multipliers y^T = c_B^T B^{-1}.
    for (std::size_t r = 0; r < m; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += p.cost[b.cols[i]] * b.inv[i][r];
      dual[r] = s;
    }
    const simd::PricingInput in{p.cost, p.rows, std::span<const double>(dual.data(), m)};
    std::ptrdiff_t entering;
    if (bland) {
      entering = simd::price_first_below(in, threshold);
    } else {
      const auto best = simd::price_min(in);
      entering = best.value < threshold ? best.index : -1;
    }
    if (entering < 0) break;
    const auto e = static_cast<std::size_t>(entering);

    std::array<double, kMaxRows> dir{};
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += b.inv[i][r] * p.rows[r][e];
      dir[i] = s;
    }

    // Ratio test; ties leave through the lowest column index.
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (dir[i] > 1e-12) best_ratio = std::min(best_ratio, b.x[i] / dir[i]);
    }
    if (!std::isfinite(best_ratio)) throw std::runtime_error("lp::solve: unbounded problem");
    std::ptrdiff_t leave = -1;
    for (std::size_t i = 0; i < m; ++i) {
      if (dir[i] <= 1e-12 || b.x[i] / dir[i] > best_ratio + 1e-15) continue;
      if (leave < 0 || b.cols[i] < b.cols[static_cast<std::size_t>(leave)]) {
        leave = static_cast<std::ptrdiff_t>(i);
      }
    }

    const std::size_t old = b.cols[static_cast<std::size_t>(leave)];
    b.cols[static_cast<std::size_t>(leave)] = e;
    if (!refactor(p, b)) {
      // Numerically singular pivot: undo and fall back to Bland's rule.
      b.cols[static_cast<std::size_t>(leave)] = old;
      refactor(p, b);
      if (bland) throw std::runtime_error("lp::solve: numerically singular basis");
      bland = true;
      continue;
    }
    for (std::size_t i = 0; i < m; ++i) b.x[i] = std::max(b.x[i], 0.0);

    ++sol.pivots;
    if (sol.pivots > options.max_pivots) throw std::runtime_error("lp::solve: pivot limit reached");
    if (best_ratio <= 1e-14) {
      if (++degenerate_run > options.degenerate_switch) bland = true;
    } else {
      degenerate_run = 0;
    }
  }

  sol.basis = b.cols;
  sol.basic_values.assign(b.x.begin(), b.x.begin() + static_cast<std::ptrdiff_t>(m));
  sol.objective = 0.0;
  for (std::size_t i = 0; i < m; ++i) sol.objective += p.cost[b.cols[i]] * b.x[i];
  sol.used_bland = bland;
  return sol;
}

}  // namespace hconv::lp
