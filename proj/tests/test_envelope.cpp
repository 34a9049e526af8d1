#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "hconv/corpus.hpp"
#include "hconv/differential.hpp"
#include "hconv/envelope.hpp"
#include "hconv/parallel.hpp"

using namespace hconv;

namespace {

EnvelopeOptions small_options() {
  EnvelopeOptions o;
  o.window = WindowSpec{2.0, 21};
  return o;
}

}  // namespace

TEST(ApplyS, ConstantGridIsUnchanged) {
  const GridField g = sample_to_grid(constant_field(2.5), Box::cube(1), Resolution::uniform(5));
  const GridField s = apply_s(g, WindowSpec{1.0, 9}, Side::left);
  EXPECT_EQ(s.values(), g.values());
}

TEST(ApplyS, HConvexGridIsAFixedPoint) {
  const ScalarField u = hconvex_sol_field();
  const GridField g = sample_to_grid(u, Box::cube(1), Resolution::uniform(9));
  const double tol = trilinear_error_bound(g, {2 + 2 * 1.0, 2 + 2 * 1.0, 4});
  for (Side side : {Side::left, Side::right}) {
    const GridField s = apply_s(g, WindowSpec{1.0, 11}, side);
    for (std::size_t n = 0; n < g.size(); ++n) {
      EXPECT_LE(s.values()[n], g.values()[n]);
      EXPECT_GE(s.values()[n], g.values()[n] - tol);
    }
  }
}

TEST(ApplyS, TwoStepFirstApplication) {
  const ScalarField u = two_step_field();
  const GridField g = sample_to_grid(u, Box::cube(2), Resolution::uniform(9));
  ApplyStats stats;
  const GridField s = apply_s(u, g, WindowSpec{4.0, 41}, Side::left, ApplyOptions{}, &stats);
  ASSERT_EQ(s.node_point(4, 4, 5).z, 0.5);
  EXPECT_NEAR(s.at(4, 4, 5), 0.5625, 1e-12);  // (0, 0, 0.5)
  EXPECT_LE(s.at(6, 4, 5), 0.05);             // (1, 0, 0.5)
  for (std::size_t n = 0; n < s.size(); ++n) {
    const Point p = s.node_point(n);
    if ((p.x != 0 || p.y != 0) && std::abs(p.z) <= 1.0) {
      EXPECT_LE(s.values()[n], 0.05) << n;
    }
  }
}

TEST(ApplyS, OutputGeometryAndBound) {
  const GridField g = sample_to_grid(failure_field(), Box{{0.1, 0, 0}, {0.5, 0.5, 0.3}}, {5, 5, 3});
  const GridField s = apply_s(g, WindowSpec{0.5, 11}, Side::left);
  EXPECT_EQ(s.resolution().nx, 5);
  EXPECT_EQ(s.resolution().nz, 3);
  EXPECT_EQ(s.box().center, g.box().center);
  for (std::size_t n = 0; n < g.size(); ++n) EXPECT_LE(s.values()[n], g.values()[n]);
}

TEST(ApplyS, RejectsNonFiniteGrids) {
  GridField g = sample_to_grid(constant_field(1), Box::cube(1), Resolution::uniform(3));
  g.mutable_values()[4] = std::nan("");
  EXPECT_THROW(apply_s(g, WindowSpec{}, Side::left), std::invalid_argument);
}

TEST(ApplyS, DeterministicAcrossWorkerCounts) {
  const GridField g = sample_to_grid(one_step_field(), Box::cube(1.5), Resolution::uniform(7));
  set_thread_count(1);
  const GridField a = apply_s(g, WindowSpec{2.0, 21}, Side::left);
  set_thread_count(4);
  const GridField b = apply_s(g, WindowSpec{2.0, 21}, Side::left);
  set_thread_count(0);
  EXPECT_EQ(a.values(), b.values());
}

TEST(Iterate, ConstantConvergesImmediately) {
  const EnvelopeReport r =
      iterate_envelope(constant_field(1.0), Box::cube(1), Resolution::uniform(5), small_options());
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.sup_deltas.front(), 0.0);
}

TEST(Iterate, OneStepNeedsOneApplication) {
  EnvelopeOptions o;
  o.keep_iterates = true;
  const EnvelopeReport r =
      iterate_envelope(one_step_field(), Box::cube(2), Resolution::uniform(21), o);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.passes, 2);
  EXPECT_EQ(r.iterates.size(), 2u);
  EXPECT_EQ(r.sup_deltas.size(), 2u);
  const CompareResult cmp = reference_compare(r.final, *corpus_entry("one_step").reference_envelope);
  EXPECT_LE(cmp.sup_error, 5e-2);
}

TEST(Iterate, MonotoneIdempotentAndSandwiched) {
  const ScalarField u = failure_field();
  const Box box = Box::cube(1.0);
  EnvelopeOptions o;
  o.window = WindowSpec{1.0, 21};
  o.keep_iterates = true;
  const EnvelopeReport r = iterate_envelope(u, box, Resolution::uniform(9), o);
  ASSERT_TRUE(r.converged);
  for (double inc : r.max_increase) EXPECT_LE(inc, 1e-9);

  // One more application barely moves the fixed point.
  const GridField again = apply_s(r.final, o.window, o.side, o.apply);
  for (std::size_t n = 0; n < again.size(); ++n) {
    EXPECT_LE(std::abs(again.values()[n] - r.final.values()[n]), o.tol);
  }
  // Euclidean envelope below, obstacle above.
  for (std::size_t n = 0; n < r.final.size(); n += 7) {
    const Point p = r.final.node_point(n);
    const double e = euclid_envelope_point(u, p, WindowSpec{1.0, 9}).value;
    EXPECT_LE(e, r.final.values()[n] + 1e-9);
    EXPECT_LE(r.final.values()[n], u(p));
  }
}

TEST(Iterate, SymmetricInputGivesSymmetricEnvelope) {
  const EnvelopeReport r =
      iterate_envelope(two_step_field(), Box::cube(2), Resolution::uniform(11), small_options());
  ASSERT_TRUE(r.converged);
  EXPECT_LE(symmetry_defect(r.final), 1e-9);
}

TEST(Iterate, FinalGridIsHConvexOnSamples) {
  const EnvelopeReport r =
      iterate_envelope(one_step_field(), Box::cube(2), Resolution::uniform(21), EnvelopeOptions{});
  auto shared = std::make_shared<const GridField>(r.final);
  ScanOptions o;
  o.step = 2.0 * r.final.max_spacing();
  o.h_radius = 0.5;
  o.n_samples = 500;
  // Tolerance: ten times the interpolation error of a function with
  // second derivatives of the envelope's size (<= 60 on the inner cube).
  o.tol = 10.0 * trilinear_error_bound(r.final, {60, 60, 60});
  const ConvexityReport rep = hconvexity_scan(as_scalar_field(shared), Box::cube(1.0), o);
  EXPECT_TRUE(rep.pass) << rep.worst_value;
}

TEST(Iterate, OptionValidation) {
  EnvelopeOptions o;
  o.tol = 0.0;
  EXPECT_THROW(iterate_envelope(constant_field(0), Box::cube(1), Resolution::uniform(3), o),
               std::invalid_argument);
  o.tol = 1e-3;
  o.max_iter = 0;
  EXPECT_THROW(iterate_envelope(constant_field(0), Box::cube(1), Resolution::uniform(3), o),
               std::invalid_argument);
}

TEST(Iterate, NonConvergenceIsReportedNotThrown) {
  EnvelopeOptions o = small_options();
  o.max_iter = 1;
  const EnvelopeReport r =
      iterate_envelope(two_step_field(), Box::cube(2), Resolution::uniform(7), o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
}

TEST(Obstacle, HConvexInputHasNoResidual) {
  const ScalarField u = hconvex_sol_field();
  const GridField g = sample_to_grid(u, Box::cube(1.5), Resolution::uniform(13));
  const ObstacleResidual r = obstacle_residual(g, u);
  EXPECT_LE(r.residual, 1e-9);
  EXPECT_LE(r.above_obstacle, 0.0);
  EXPECT_GT(r.nodes_checked, 0);
}

TEST(Obstacle, EnvelopeAboveTheObstacleIsFlagged) {
  const ScalarField u = hconvex_sol_field();
  GridField g = sample_to_grid(u, Box::cube(1.5), Resolution::uniform(13));
  for (double& v : g.mutable_values()) v += 0.5;
  EXPECT_NEAR(obstacle_residual(g, u).above_obstacle, 0.5, 1e-12);
}

TEST(Compare, SelfComparisonIsZero) {
  const ScalarField u = one_step_field();
  const GridField g = sample_to_grid(u, Box::cube(2), Resolution::uniform(9));
  const CompareResult c = reference_compare(g, u);
  EXPECT_EQ(c.sup_error, 0.0);
  EXPECT_EQ(c.mean_error, 0.0);
  EXPECT_EQ(c.nodes, 125);
}

TEST(Kink, DetectsNonsmoothPoints) {
  const ScalarField abs_x([](const Point& p) { return std::abs(p.x); });
  EXPECT_TRUE(is_kink(abs_x, {0.0, 0.3, 0.2}, 1e-2));
  EXPECT_FALSE(is_kink(one_step_field(), {0.3, 0.3, 0.2}, 1e-2));
}
