#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "hconv/corpus.hpp"
#include "hconv/fields.hpp"

using namespace hconv;

namespace {

ScalarField coord_field(int axis) {
  return ScalarField([axis](const Point& p) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; });
}

Point random_in(std::mt19937_64& rng, const Box& b) {
  std::uniform_real_distribution<double> ux(b.lo(0), b.hi(0));
  std::uniform_real_distribution<double> uy(b.lo(1), b.hi(1));
  std::uniform_real_distribution<double> uz(b.lo(2), b.hi(2));
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y, uz(rng)};
}

}  // namespace

TEST(Evaluate, CorpusPointValues) {
  EXPECT_DOUBLE_EQ(two_step_field()({0, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(one_step_field()({1, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(failure_field()({0, 0, 0}), 0.0);
}

TEST(Certificate, CorpusCertificatesHoldOnSamples) {
  for (const auto& [id, description] : corpus_list()) {
    const ScalarField& f = corpus_entry(id).field;
    if (!f.certificate()) continue;
    EXPECT_LE(certificate_violation(f, *f.certificate(), 20.0, 20000, 99), 1e-9) << id;
  }
}

TEST(Certificate, ViolatedCertificateIsRejected) {
  const ScalarField f = polynomial_field({{1.0, 2, 0, 0}});  // x^2 misses growth in y, z
  EXPECT_THROW(f.certified({1.0, 0.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(f.certified({0.0, 0.0, 2.0}), std::invalid_argument);
}

TEST(Certificate, SuperlinearNeedsExponentAboveOne) {
  EXPECT_TRUE((CoercivityCertificate{1.0, 0.0, 2.0}.superlinear()));
  EXPECT_FALSE((CoercivityCertificate{1.0, 0.0, 1.0}.superlinear()));
}

TEST(SampleToGrid, ConstantFieldEverywhere) {
  const GridField g = sample_to_grid(constant_field(5.0), Box{{1, 2, 3}, {0.5, 2, 1}}, {3, 5, 7});
  ASSERT_EQ(g.size(), 105u);
  for (double v : g.values()) EXPECT_EQ(v, 5.0);
}

TEST(SampleToGrid, LinearFieldSlices) {
  const GridField g = sample_to_grid(coord_field(2), Box::cube(1.0), Resolution::uniform(3));
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) EXPECT_EQ(g.at(i, j, k), k - 1.0);
    }
  }
}

TEST(SampleToGrid, TwoStepNodeOnUnitLevel) {
  const GridField g = sample_to_grid(two_step_field(), Box::cube(2.0), Resolution::uniform(41));
  const Point p = g.node_point(20, 20, 30);
  EXPECT_DOUBLE_EQ(p.z, 1.0);
  EXPECT_EQ(g.at(20, 20, 30), 0.0);
}

TEST(SampleToGrid, RejectsSmallResolutionAndDegenerateBox) {
  EXPECT_THROW(sample_to_grid(constant_field(0), Box::cube(1), {2, 3, 3}), std::invalid_argument);
  EXPECT_THROW(sample_to_grid(constant_field(0), Box{{}, {1, 0, 1}}, Resolution::uniform(3)),
               std::invalid_argument);
}

TEST(SampleToGrid, NodeValuesEqualFieldAtNodes) {
  const ScalarField f = one_step_field();
  const GridField g = sample_to_grid(f, Box{{0.1, -0.2, 0.3}, {1, 1.5, 2}}, {5, 7, 9});
  for (std::size_t n = 0; n < g.size(); ++n) {
    EXPECT_EQ(g.values()[n], f(g.node_point(n)));
    EXPECT_EQ(g.interpolate(g.node_point(n)), g.values()[n]);
  }
}

TEST(Interpolate, EdgeMidpoint) {
  std::vector<double> v(27, 0.0);
  GridField g(Box::cube(1.0), Resolution::uniform(3), v, FillMode::clamp);
  g.mutable_values()[g.index(1, 1, 1)] = 0.0;
  g.mutable_values()[g.index(2, 1, 1)] = 2.0;
  EXPECT_DOUBLE_EQ(g.interpolate({0.5, 0, 0}), 1.0);
}

TEST(Interpolate, AffineFieldsAreReproduced) {
  const ScalarField f([](const Point& p) { return 1.0 + 2.0 * p.x - 3.0 * p.y + 0.5 * p.z; });
  const Box box{{0.2, 0.1, -0.3}, {1.0, 2.0, 1.5}};
  const GridField g = sample_to_grid(f, box, {5, 9, 7});
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Point p = random_in(rng, box);
    EXPECT_NEAR(g.interpolate(p), f(p), 1e-12);
  }
}

TEST(Interpolate, MonotoneInNodeValues) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  const Box box = Box::cube(1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(125);
    for (double& x : v) x = u(rng);
    const GridField g(box, Resolution::uniform(5), v, FillMode::clamp);
    std::vector<double> raised = v;
    raised[static_cast<std::size_t>(trial) % raised.size()] += std::abs(u(rng)) + 1e-3;
    const GridField h = g.with_values(raised);
    for (int i = 0; i < 20; ++i) {
      const Point p = random_in(rng, Box::cube(1.3));
      EXPECT_GE(h.interpolate(p), g.interpolate(p));
    }
  }
}

TEST(Interpolate, TrilinearErrorBoundHolds) {
  const ScalarField f = hconvex_sol_field();  // x^2+y^2+x^2y^2+2z^2
  const Box box = Box::cube(2.0);
  const GridField g = sample_to_grid(f, box, Resolution::uniform(11));
  const double bound = trilinear_error_bound(g, {10.0, 10.0, 4.0});
  EXPECT_NEAR(bound, 0.16 * 24.0 / 8.0, 1e-12);
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const Point p = random_in(rng, box);
    worst = std::max(worst, std::abs(g.interpolate(p) - f(p)));
  }
  EXPECT_LE(worst, bound);
  EXPECT_GT(worst, 0.1 * bound);
}

TEST(FillModes, OutsideTheBox) {
  const ScalarField f = one_step_field();
  const Box box = Box::cube(1.0);
  const Point far{3.0, 0.0, 0.0};

  const GridField obstacle = sample_to_grid(f, box, Resolution::uniform(5));
  EXPECT_EQ(obstacle.fill_mode(), FillMode::obstacle);
  EXPECT_DOUBLE_EQ(obstacle.interpolate(far), f(far));

  const GridField minorant = sample_to_grid(f, box, Resolution::uniform(5), FillMode::minorant);
  EXPECT_DOUBLE_EQ(minorant.interpolate(far), f.certificate()->minorant(far));

  const GridField clamp = sample_to_grid(f, box, Resolution::uniform(5), FillMode::clamp);
  EXPECT_DOUBLE_EQ(clamp.interpolate(far), f({1.0, 0.0, 0.0}));

  // Without a certificate the minorant fill falls back to clamping.
  const GridField bare = sample_to_grid(two_step_field(), box, Resolution::uniform(5),
                                        FillMode::minorant);
  EXPECT_DOUBLE_EQ(bare.interpolate({0, 0, 3}), two_step_field()({0, 0, 1}));
}

TEST(FillModes, RoundTripThroughStrings) {
  for (FillMode m : {FillMode::obstacle, FillMode::minorant, FillMode::clamp}) {
    EXPECT_EQ(fill_mode_from_string(to_string(m)), m);
  }
  EXPECT_THROW(fill_mode_from_string("nearest"), std::invalid_argument);
}

TEST(GridAsField, SharesValuesAndFill) {
  const ScalarField f = two_step_field();
  auto g = std::make_shared<const GridField>(sample_to_grid(f, Box::cube(2), Resolution::uniform(9)));
  const ScalarField w = as_scalar_field(g, "wrapped");
  EXPECT_EQ(w.name(), "wrapped");
  EXPECT_DOUBLE_EQ(w({0.5, 0.5, 0.5}), g->interpolate({0.5, 0.5, 0.5}));
  EXPECT_DOUBLE_EQ(w({0, 0, 5}), f({0, 0, 5}));
}

TEST(Reflection, SymmetricCorpusFieldIsFixed) {
  const ScalarField f = hconvex_sol_field();
  const ScalarField r = reflect_z_axis(f);
  std::mt19937_64 rng(10);
  for (int i = 0; i < 1000; ++i) {
    const Point p = random_in(rng, Box::cube(2));
    EXPECT_EQ(r(p), f(p));
  }
}

TEST(Reflection, CoordinateAndInvolution) {
  const ScalarField x = coord_field(0);
  const ScalarField rx = reflect_z_axis(x);
  const ScalarField rrx = reflect_z_axis(rx);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Point p = random_in(rng, Box::cube(3));
    EXPECT_EQ(rx(p), -p.x);
    EXPECT_EQ(rrx(p), x(p));
  }
}

TEST(SymmetryDefect, ExamplesAndSymmetrization) {
  EXPECT_LE(symmetry_defect(hconvex_sol_field(), Box::cube(2), 1000), 1e-12);
  EXPECT_EQ(symmetry_defect(coord_field(2), Box::cube(2), 1000), 0.0);
  const ScalarField u = no_symmetry_field();
  // u(1,1,0) = 1.75 and u(-1,-1,0) = -0.25.
  EXPECT_DOUBLE_EQ(u({1, 1, 0}), 1.75);
  EXPECT_DOUBLE_EQ(u({-1, -1, 0}), -0.25);
  EXPECT_GT(symmetry_defect(u, Box::cube(2), 1000), 1.0);
  EXPECT_LE(symmetry_defect(z_symmetrize(u), Box::cube(2), 1000), 1e-12);
}

TEST(SymmetryDefect, GridNodes) {
  const GridField sym = sample_to_grid(two_step_field(), Box::cube(2), Resolution::uniform(9));
  EXPECT_EQ(symmetry_defect(sym), 0.0);
  const GridField asym = sample_to_grid(coord_field(0), Box::cube(2), Resolution::uniform(9));
  EXPECT_DOUBLE_EQ(symmetry_defect(asym), 4.0);
}

TEST(Polynomial, AbsoluteValueFactor) {
  const ScalarField f = polynomial_field({{2.0, 1, 0, 0, 1}});  // 2 x |y|
  EXPECT_DOUBLE_EQ(f({1.5, -2.0, 0}), 6.0);
  EXPECT_DOUBLE_EQ(f({1.5, 2.0, 0}), 6.0);
}
