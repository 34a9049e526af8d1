// Compiled with -mavx2 (and without FMA); only called after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hconv/simd/kernels.hpp"

namespace hconv::simd::avx2 {

namespace {

inline __m256d reduced_cost4(const PricingInput& in, std::size_t j) {
  __m256d d = _mm256_loadu_pd(in.cost.data() + j);
  for (std::size_t r = 0; r < in.rows.size(); ++r) {
    const __m256d y = _mm256_set1_pd(in.dual[r]);
    d = _mm256_sub_pd(d, _mm256_mul_pd(y, _mm256_loadu_pd(in.rows[r] + j)));
  }
  return d;
}

inline double reduced_cost1(const PricingInput& in, std::size_t j) {
  double d = in.cost[j];
  for (std::size_t r = 0; r < in.rows.size(); ++r) d = d - in.dual[r] * in.rows[r][j];
  return d;
}

}  // namespace

PricingResult price_min(const PricingInput& in) {
  const std::size_t n = in.cost.size();
  const std::size_t n4 = n & ~std::size_t{3};
  PricingResult best{std::numeric_limits<double>::infinity(), -1};
  if (n4 > 0) {
    __m256d vmin = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d vidx = _mm256_set1_pd(-1.0);
    __m256d jvec = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    const __m256d four = _mm256_set1_pd(4.0);
    for (std::size_t j = 0; j < n4; j += 4) {
      const __m256d d = reduced_cost4(in, j);
      const __m256d lt = _mm256_cmp_pd(d, vmin, _CMP_LT_OQ);
      vmin = _mm256_blendv_pd(vmin, d, lt);
      vidx = _mm256_blendv_pd(vidx, jvec, lt);
      jvec = _mm256_add_pd(jvec, four);
    }
    alignas(32) double mins[4];
    alignas(32) double idxs[4];
    _mm256_store_pd(mins, vmin);
    _mm256_store_pd(idxs, vidx);
    for (int l = 0; l < 4; ++l) {
      if (idxs[l] < 0.0) continue;
      const auto idx = static_cast<std::ptrdiff_t>(idxs[l]);
      if (mins[l] < best.value || (mins[l] == best.value && idx < best.index)) {
        best.value = mins[l];
        best.index = idx;
      }
    }
  }
  for (std::size_t j = n4; j < n; ++j) {
    const double d = reduced_cost1(in, j);
    if (d < best.value) {
      best.value = d;
      best.index = static_cast<std::ptrdiff_t>(j);
    }
  }
  return best;
}

std::ptrdiff_t price_first_below(const PricingInput& in, double threshold) {
  const std::size_t n = in.cost.size();
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d thr = _mm256_set1_pd(threshold);
  for (std::size_t j = 0; j < n4; j += 4) {
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(reduced_cost4(in, j), thr, _CMP_LT_OQ));
    if (mask != 0) return static_cast<std::ptrdiff_t>(j) + __builtin_ctz(static_cast<unsigned>(mask));
  }
  for (std::size_t j = n4; j < n; ++j) {
    if (reduced_cost1(in, j) < threshold) return static_cast<std::ptrdiff_t>(j);
  }
  return -1;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max({lanes[0], lanes[1], lanes[2], lanes[3]});
  for (std::size_t i = n4; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t n4 = n & ~std::size_t{3};
  double m = -std::numeric_limits<double>::infinity();
  if (n4 > 0) {
    __m256d acc = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n4; i += 4) {
      acc = _mm256_max_pd(
          acc, _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    m = std::max({lanes[0], lanes[1], lanes[2], lanes[3]});
  }
  for (std::size_t i = n4; i < n; ++i) m = std::max(m, a[i] - b[i]);
  return m;
}

void add_weighted_square(std::span<const double> base, std::span<const double> residual,
                         double weight, std::span<double> out) {
  const std::size_t n = base.size();
  const std::size_t n4 = n & ~std::size_t{3};
  const __m256d w = _mm256_set1_pd(weight);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d r = _mm256_loadu_pd(residual.data() + i);
    const __m256d sq = _mm256_mul_pd(r, r);
    _mm256_storeu_pd(out.data() + i,
                     _mm256_add_pd(_mm256_loadu_pd(base.data() + i), _mm256_mul_pd(w, sq)));
  }
  for (std::size_t i = n4; i < n; ++i) {
    const double sq = residual[i] * residual[i];
    out[i] = base[i] + weight * sq;
  }
}

}  // namespace hconv::simd::avx2
