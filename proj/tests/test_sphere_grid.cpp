#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cflow/errors.hpp"
#include "cflow/sphere_grid.hpp"

using namespace cflow;
constexpr double kPi = std::numbers::pi;

TEST(SphereGrid, CircleNodesAndWeights) {
  const auto g = SphereGrid::circle(16);
  ASSERT_EQ(g->size(), 16u);
  for (std::size_t k = 0; k < g->size(); ++k) {
    EXPECT_NEAR(g->theta(k), 2.0 * kPi * k / 16.0, 1e-15);
    EXPECT_DOUBLE_EQ(g->weights()[k], 2.0 * kPi / 16.0);
    EXPECT_NEAR(g->node(k).x(), std::cos(g->theta(k)), 1e-15);
    EXPECT_EQ(g->node(k).z(), 0.0);
  }
  EXPECT_EQ(g->antipode(3), 11u);
}

TEST(SphereGrid, NodesAreUnitVectors) {
  for (const auto& g : {SphereGrid::circle(64), SphereGrid::sphere(16, 32)}) {
    double worst = 0.0;
    for (const auto& z : g->nodes()) worst = std::max(worst, std::abs(z.norm() - 1.0));
    EXPECT_LT(worst, 1e-15);
  }
}

TEST(SphereGrid, SphereWeightsSumToArea) {
  for (int nt : {16, 32, 64}) {
    const auto g = SphereGrid::sphere(nt, 2 * nt);
    double sum = 0.0;
    for (double w : g->weights()) sum += w;
    const double err = std::abs(sum - 4.0 * kPi);
    EXPECT_LT(err, 1e-12 * 4.0 * kPi) << nt;
  }
}

TEST(SphereGrid, SphereAntipode) {
  const auto g = SphereGrid::sphere(16, 32);
  for (std::size_t k = 0; k < g->size(); ++k) EXPECT_NEAR((g->node(g->antipode(k)) + g->node(k)).norm(), 0.0, 1e-14);
}

TEST(SphereGrid, IntegrateConstantAndOddFunctions) {
  EXPECT_NEAR(integrate(ScalarField::constant(SphereGrid::circle(32), 1.0)), 2.0 * kPi, 1e-14);
  const auto g = SphereGrid::sphere(32, 64);
  EXPECT_NEAR(integrate(ScalarField::constant(g, 1.0)) / (4.0 * kPi), 1.0, 1e-12);
  EXPECT_NEAR(integrate(ScalarField::from_function(g, [](const Vec3& z) { return z.z(); })), 0.0, 1e-12);
}

TEST(SphereGrid, IntegrateSecondMoment) {
  // integral of z_3^2 over S^2 is 4 pi / 3.
  const auto g = SphereGrid::sphere(64, 128);
  const double v = integrate(ScalarField::from_function(g, [](const Vec3& z) { return z.z() * z.z(); }));
  EXPECT_NEAR(v, 4.0 * kPi / 3.0, 1e-3);
}

TEST(SphereGrid, RejectsBadResolutions) {
  EXPECT_THROW(SphereGrid::circle(8), ConfigError);
  EXPECT_THROW(SphereGrid::circle(33), ConfigError);
  EXPECT_THROW(SphereGrid::sphere(16, 30), ConfigError);
  EXPECT_THROW(SphereGrid::sphere(16, 33), ConfigError);
  EXPECT_THROW(SphereGrid::sphere(8, 32), ConfigError);
  const std::vector<int> one{64}, two{16, 32};
  EXPECT_THROW(build_grid(4, one), ConfigError);
  EXPECT_THROW(build_grid(2, two), ConfigError);
  EXPECT_THROW(build_grid(3, one), ConfigError);
  EXPECT_NO_THROW(build_grid(3, two));
}

TEST(ScalarField, RejectsWrongSizeAndNonFinite) {
  const auto g = SphereGrid::circle(16);
  EXPECT_THROW(ScalarField(g, std::vector<double>(15, 1.0)), ConfigError);
  std::vector<double> v(16, 1.0);
  v[3] = std::nan("");
  EXPECT_ANY_THROW(ScalarField(g, v));
}
