#include <atomic>
#include <cstdlib>
#include <cstring>

#include "hconv/simd/kernels.hpp"

namespace hconv::simd {

namespace {

Isa detect() {
  if (const char* env = std::getenv("HCONV_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::scalar;
  }
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(HCONV_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
}

#if defined(HCONV_HAVE_AVX2_KERNELS)
#define HCONV_DISPATCH(fn, ...) \
  (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define HCONV_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

PricingResult price_min(const PricingInput& in) { return HCONV_DISPATCH(price_min, in); }

std::ptrdiff_t price_first_below(const PricingInput& in, double threshold) {
  return HCONV_DISPATCH(price_first_below, in, threshold);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return HCONV_DISPATCH(max_abs_diff, a, b);
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  return HCONV_DISPATCH(max_diff, a, b);
}

void add_weighted_square(std::span<const double> base, std::span<const double> residual,
                         double weight, std::span<double> out) {
  HCONV_DISPATCH(add_weighted_square, base, residual, weight, out);
}

#undef HCONV_DISPATCH

}  // namespace hconv::simd
