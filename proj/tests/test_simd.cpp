#include <gtest/gtest.h>

#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "hconv/convexify.hpp"
#include "hconv/corpus.hpp"
#include "hconv/simd/kernels.hpp"

using namespace hconv;
namespace simd = hconv::simd;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

struct Data {
  std::vector<double> cost;
  std::vector<std::vector<double>> rows;
  std::vector<const double*> ptrs;
  std::vector<double> dual;

  simd::PricingInput input() const { return {cost, ptrs, dual}; }
};

Data make_lp_data(std::mt19937_64& rng, std::size_t n, std::size_t m, bool coarse) {
  std::uniform_real_distribution<double> u(-2, 2);
  std::uniform_int_distribution<int> ui(-2, 2);
  Data d;
  d.cost.resize(n);
  d.rows.assign(m, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    d.cost[j] = coarse ? ui(rng) : u(rng);
    for (std::size_t r = 0; r < m; ++r) d.rows[r][j] = coarse ? ui(rng) : u(rng);
  }
  for (const auto& r : d.rows) d.ptrs.push_back(r.data());
  for (std::size_t r = 0; r < m; ++r) d.dual.push_back(coarse ? ui(rng) : u(rng));
  return d;
}

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
#ifndef HCONV_HAVE_AVX2_KERNELS
    GTEST_SKIP() << "no AVX2 kernels on this architecture";
#else
    if (!simd::avx2_available()) GTEST_SKIP() << "CPU lacks AVX2";
#endif
  }
  void TearDown() override { simd::force_isa(simd::avx2_available() ? simd::Isa::avx2 : simd::Isa::scalar); }
};

}  // namespace

#ifdef HCONV_HAVE_AVX2_KERNELS

TEST_F(SimdEquivalence, PricingKernelsAgreeBitForBit) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 1681u, 6641u}) {
    for (std::size_t m = 1; m <= 4; ++m) {
      for (bool coarse : {false, true}) {
        const Data d = make_lp_data(rng, n, m, coarse);
        const simd::PricingResult a = simd::scalar::price_min(d.input());
        const simd::PricingResult b = simd::avx2::price_min(d.input());
        EXPECT_EQ(a.index, b.index) << n << " " << m;
        if (n > 0) {
          EXPECT_TRUE(same_bits(a.value, b.value)) << n << " " << m;
        }
        for (double thr : {-1.0, 0.0, 0.5}) {
          EXPECT_EQ(simd::scalar::price_first_below(d.input(), thr),
                    simd::avx2::price_first_below(d.input(), thr));
        }
      }
    }
  }
}

TEST_F(SimdEquivalence, PricingTiesPickLowestIndex) {
  Data d;
  d.cost = {3, 1, 2, 1, 1, 5, 1, 1, 1};
  d.rows = {std::vector<double>(9, 0.0)};
  d.ptrs = {d.rows[0].data()};
  d.dual = {0.0};
  EXPECT_EQ(simd::scalar::price_min(d.input()).index, 1);
  EXPECT_EQ(simd::avx2::price_min(d.input()).index, 1);
  EXPECT_EQ(simd::avx2::price_first_below(d.input(), 1.5), 1);
}

TEST_F(SimdEquivalence, ReductionKernelsAgreeBitForBit) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3, 3);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 11u, 64u, 68921u}) {
    std::vector<double> a(n), b(n), r(n), out1(n), out2(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
      r[i] = u(rng);
    }
    EXPECT_TRUE(same_bits(simd::scalar::max_abs_diff(a, b), simd::avx2::max_abs_diff(a, b)));
    EXPECT_TRUE(same_bits(simd::scalar::max_diff(a, b), simd::avx2::max_diff(a, b)));
    simd::scalar::add_weighted_square(a, r, 37.5, out1);
    simd::avx2::add_weighted_square(a, r, 37.5, out2);
    for (std::size_t i = 0; i < n; ++i) EXPECT_TRUE(same_bits(out1[i], out2[i]));
  }
}

TEST_F(SimdEquivalence, ConvexificationIdenticalUnderBothIsas) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const auto& id : {"one_step", "failure", "no_symmetry", "hconvex_sol"}) {
    const ScalarField& f = corpus_entry(id).field;
    for (int i = 0; i < 10; ++i) {
      const Point p{u(rng), u(rng), u(rng)};
      const WindowSpec w{1.5, 21};
      simd::force_isa(simd::Isa::scalar);
      const ConvexCombination a = plane_lattice_convexify(f, p, Side::left, w);
      const ConvexCombination ea = s_tilde_eps_point(f, p, 0.1, WindowSpec{0.5, 7});
      simd::force_isa(simd::Isa::avx2);
      const ConvexCombination b = plane_lattice_convexify(f, p, Side::left, w);
      const ConvexCombination eb = s_tilde_eps_point(f, p, 0.1, WindowSpec{0.5, 7});
      EXPECT_TRUE(same_bits(a.value, b.value)) << id;
      EXPECT_EQ(a.weights, b.weights) << id;
      EXPECT_TRUE(same_bits(ea.value, eb.value)) << id;
      EXPECT_EQ(ea.points, eb.points) << id;
    }
  }
}

#endif

TEST(SimdDispatch, ForcingScalarIsHonored) {
  const simd::Isa before = simd::active_isa();
  simd::force_isa(simd::Isa::scalar);
  EXPECT_EQ(simd::active_isa(), simd::Isa::scalar);
  EXPECT_EQ(simd::to_string(simd::Isa::scalar), "scalar");
  simd::force_isa(before);
}

TEST(SimdDispatch, EmptyReductions) {
  const std::vector<double> none;
  EXPECT_EQ(simd::max_abs_diff(none, none), 0.0);
  EXPECT_EQ(simd::max_diff(none, none), -std::numeric_limits<double>::infinity());
}
