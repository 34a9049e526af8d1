#pragma once

// Data-parallel inner loops of the convexification LP and the envelope
// iteration. Each kernel has a scalar reference and an AVX2 variant; the
// variant is picked once at runtime from the CPU features. Both variants
// perform the same floating-point operations in the same order (no FMA
// contraction), so their results agree bit for bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace hconv::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// ISA used by the dispatching entry points below. Honors HCONV_SIMD=scalar.
Isa active_isa();
bool avx2_available();
/// Overrides the runtime choice (tests and benchmarks). Requests for an
/// unavailable ISA fall back to scalar.
void force_isa(Isa isa);

struct PricingResult {
  double value = 0.0;
  std::ptrdiff_t index = -1;
};

/// Reduced costs d_j = cost[j] - dual[0]*rows[0][j] - ... - dual[m-1]*rows[m-1][j],
/// evaluated left to right. `rows` holds m pointers to arrays of cost.size().
/// All rows of the LP live behind these pointers, m <= 4.
struct PricingInput {
  std::span<const double> cost;
  std::span<const double* const> rows;
  std::span<const double> dual;
};

/// Smallest reduced cost and the lowest index attaining it.
PricingResult price_min(const PricingInput& in);

/// Lowest index with reduced cost < threshold, or -1 (Bland's rule).
std::ptrdiff_t price_first_below(const PricingInput& in, double threshold);

/// max_i |a[i] - b[i]| (0 for empty input).
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// max_i (a[i] - b[i]) (-inf for empty input).
double max_diff(std::span<const double> a, std::span<const double> b);

/// out[i] = base[i] + weight * residual[i]^2.
void add_weighted_square(std::span<const double> base, std::span<const double> residual,
                         double weight, std::span<double> out);

namespace scalar {
PricingResult price_min(const PricingInput& in);
std::ptrdiff_t price_first_below(const PricingInput& in, double threshold);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_diff(std::span<const double> a, std::span<const double> b);
void add_weighted_square(std::span<const double> base, std::span<const double> residual,
                         double weight, std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define HCONV_HAVE_AVX2_KERNELS 1
namespace avx2 {
PricingResult price_min(const PricingInput& in);
std::ptrdiff_t price_first_below(const PricingInput& in, double threshold);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_diff(std::span<const double> a, std::span<const double> b);
void add_weighted_square(std::span<const double> base, std::span<const double> residual,
                         double weight, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace hconv::simd
