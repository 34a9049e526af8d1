#pragma once

// Dense revised simplex for   min c.w  s.t.  A w = b, w >= 0
// with very few rows (m <= 4) and many columns. The basis inverse is an
// explicit m x m matrix refactored after every pivot; pricing runs through
// the SIMD kernels.

#include <cstddef>
#include <span>
#include <vector>

namespace hconv::lp {

inline constexpr std::size_t kMaxRows = 4;

struct Problem {
  std::span<const double> cost;
  /// m pointers, each to an array of cost.size() constraint coefficients.
  std::span<const double* const> rows;
  std::span<const double> rhs;
};

struct Options {
  /// Pivot budget; exceeding it throws std::runtime_error.
  int max_pivots = 100000;
  /// Consecutive degenerate pivots tolerated under Dantzig pricing before
  /// switching permanently to Bland's rule.
  int degenerate_switch = 64;
  /// Relative reduced-cost tolerance (scaled by max(1, max |cost|)).
  double optimality_tol = 1e-12;
};

struct Solution {
  /// Basic column indices (size m) and their values, in basis-slot order.
  std::vector<std::size_t> basis;
  std::vector<double> basic_values;
  double objective = 0.0;
  int pivots = 0;
  bool used_bland = false;
};

/// Solves from a primal-feasible starting basis. Throws std::invalid_argument
/// when the starting basis is singular or infeasible.
Solution solve(const Problem& problem, std::span<const std::size_t> initial_basis,
               const Options& options = {});

}  // namespace hconv::lp
