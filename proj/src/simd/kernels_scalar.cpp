#include <algorithm>
#include <cmath>
#include <limits>

#include "hconv/simd/kernels.hpp"

namespace hconv::simd::scalar {

namespace {

inline double reduced_cost(const PricingInput& in, std::size_t j) {
  double d = in.cost[j];
  for (std::size_t r = 0; r < in.rows.size(); ++r) d = d - in.dual[r] * in.rows[r][j];
  return d;
}

}  // namespace

PricingResult price_min(const PricingInput& in) {
  PricingResult best{std::numeric_limits<double>::infinity(), -1};
  for (std::size_t j = 0; j < in.cost.size(); ++j) {
    const double d = reduced_cost(in, j);
    if (d < best.value) {
      best.value = d;
      best.index = static_cast<std::ptrdiff_t>(j);
    }
  }
  return best;
}

std::ptrdiff_t price_first_below(const PricingInput& in, double threshold) {
  for (std::size_t j = 0; j < in.cost.size(); ++j) {
    if (reduced_cost(in, j) < threshold) return static_cast<std::ptrdiff_t>(j);
  }
  return -1;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] - b[i]);
  return m;
}

void add_weighted_square(std::span<const double> base, std::span<const double> residual,
                         double weight, std::span<double> out) {
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double sq = residual[i] * residual[i];
    out[i] = base[i] + weight * sq;
  }
}

}  // namespace hconv::simd::scalar
