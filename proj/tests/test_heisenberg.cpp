#include <gtest/gtest.h>

#include <random>

#include "hconv/heisenberg.hpp"

using namespace hconv;

namespace {

Point random_point(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  const double x = u(rng);
  const double y = u(rng);
  return {x, y, u(rng)};
}

void expect_point_near(const Point& a, const Point& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

}  // namespace

TEST(GroupLaw, ProductOfUnitHorizontalElements) {
  expect_point_near(group_mul({1, 0, 0}, {0, 1, 0}), {1, 1, 0.5}, 0.0);
  expect_point_near(group_mul({0, 1, 0}, {1, 0, 0}), {1, 1, -0.5}, 0.0);
}

TEST(GroupLaw, InverseAndIdentity) {
  const Point p{1.5, -2.0, 0.25};
  expect_point_near(group_mul(p, group_inverse(p)), {0, 0, 0}, 0.0);
  expect_point_near(group_mul(group_inverse(p), p), {0, 0, 0}, 0.0);
  expect_point_near(group_mul(p, {}), p, 0.0);
}

TEST(GroupLaw, AssociativityOnRandomTriples) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const Point p = random_point(rng, 10);
    const Point q = random_point(rng, 10);
    const Point r = random_point(rng, 10);
    expect_point_near(group_mul(group_mul(p, q), r), group_mul(p, group_mul(q, r)), 1e-12);
  }
}

TEST(Gauge, KnownValuesAndInverseInvariance) {
  EXPECT_DOUBLE_EQ(gauge_norm({0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(gauge_norm({1, 0, 0}), 1.0);
  EXPECT_NEAR(gauge_norm({0, 0, 1}), 2.0, 1e-15);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Point p = random_point(rng, 5);
    EXPECT_DOUBLE_EQ(gauge_norm(group_inverse(p)), gauge_norm(p));
  }
}

TEST(Frame, RowsAtSamplePoints) {
  const auto at = [](const Point& p) { return horizontal_frame(p).rows; };
  using Rows = std::array<std::array<double, 3>, 2>;
  EXPECT_EQ(at({0, 0, 0}), (Rows{{{1, 0, 0}, {0, 1, 0}}}));
  EXPECT_EQ(at({2, 4, 1}), (Rows{{{1, 0, -2}, {0, 1, 1}}}));
  EXPECT_EQ(at({0, -2, 0}), (Rows{{{1, 0, 1}, {0, 1, 0}}}));
}

TEST(Planes, PointsLieOnTheirPlanes) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 10000; ++i) {
    const Point p = random_point(rng, 5);
    const PlaneCoord h{u(rng), u(rng)};
    EXPECT_NEAR(plane_residual_left(p, left_plane_point(p, h)), 0.0, 1e-12);
    EXPECT_NEAR(plane_residual_right(p, right_plane_point(p, h)), 0.0, 1e-12);
  }
}

TEST(Planes, LeftPlaneExamples) {
  // p . (a, b, 0) at p = (1, 0, 0) has z = b / 2.
  expect_point_near(left_plane_point({1, 0, 0}, {0.3, 2.0}), {1.3, 2.0, 1.0}, 1e-15);
  expect_point_near(right_plane_point({1, 0, 0}, {0.3, 2.0}), {1.3, 2.0, -1.0}, 1e-15);
  // At the origin the two planes coincide with z = 0.
  expect_point_near(left_plane_point({}, {0.7, -0.2}), right_plane_point({}, {0.7, -0.2}), 0.0);
}

TEST(Planes, EuclideanCombinationsStayOnThePlane) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int i = 0; i < 2000; ++i) {
    const Point p = random_point(rng, 3);
    const Side side = i % 2 ? Side::left : Side::right;
    double c[3] = {unit(rng), unit(rng), unit(rng)};
    const double s = c[0] + c[1] + c[2];
    Point m;
    for (double& ci : c) {
      ci /= s;
      const Point q = plane_point(side, p, {u(rng), u(rng)});
      m = {m.x + ci * q.x, m.y + ci * q.y, m.z + ci * q.z};
    }
    EXPECT_NEAR(plane_residual(side, p, m), 0.0, 1e-12);
  }
}

TEST(Reflection, ZAxisReflectionIsAnAutomorphism) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Point p = random_point(rng, 4);
    const Point q = random_point(rng, 4);
    expect_point_near(reflect_z(group_mul(p, q)), group_mul(reflect_z(p), reflect_z(q)), 1e-12);
  }
}
