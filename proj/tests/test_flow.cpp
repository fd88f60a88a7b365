#include <cmath>

#include <gtest/gtest.h>

#include "test_util.hpp"

#include "cflow/errors.hpp"
#include "cflow/flow.hpp"
#include "cflow/run_config.hpp"
#include "cflow/verification.hpp"
#include "oracles.hpp"

using namespace cflow;

namespace {

FlowConfig config(int n, double p, FlowDirection d = FlowDirection::expanding_primal) {
  FlowConfig c;
  c.n = n;
  c.p = p;
  c.direction = d;
  c.t_end = 1.0;
  if (d == FlowDirection::shrinking_primal) c.volume_floor = 1e-6;
  return c;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST(Rhs, ExpandingBallAndTranslatedBall) {
  const auto g = SphereGrid::circle(64);
  for (double v : values_of(rhs_expanding(ScalarField::constant(g, 2.0), config(2, 0.5)))) EXPECT_NEAR(v, std::sqrt(2.0), 1e-13);
  for (double v : values_of(rhs_expanding(translated_ball_support(g, 2.0, Vec3(0.5, 0.3, 0)), config(2, 0.5))))
    EXPECT_NEAR(v, std::sqrt(2.0), 1e-12);
  const auto s = SphereGrid::sphere(32, 64);
  for (double v : values_of(rhs_expanding(ScalarField::constant(s, 2.0), config(3, 0.5)))) EXPECT_NEAR(v, std::sqrt(2.0), 1e-11);
}

TEST(Rhs, DipoleAnisotropyOnUnitBall) {
  const auto g = SphereGrid::circle(64);
  auto cfg = config(2, 0.5);
  cfg.phi = Anisotropy::dipole(0.1, Vec3::UnitX());
  const auto r = rhs_expanding(ScalarField::constant(g, 1.0), cfg);
  for (std::size_t k = 0; k < g->size(); ++k) EXPECT_NEAR(r[k], 1.0 + 0.1 * g->node(k).x(), 1e-13);
}

TEST(Rhs, ShrinkingBall) {
  const auto g = SphereGrid::circle(64);
  for (double v : values_of(rhs_shrinking(ScalarField::constant(g, 2.0), config(2, 0.5, FlowDirection::shrinking_primal))))
    EXPECT_NEAR(v, -1.0 / std::sqrt(2.0), 1e-13);
}

TEST(Rhs, DualBall) {
  const auto g = SphereGrid::circle(64);
  const double R = 2.0;
  for (double p : {0.3, 0.5, 0.8}) {
    for (double v : values_of(rhs_dual(ScalarField::constant(g, 1.0 / R), config(2, p, FlowDirection::expanding_dual))))
      EXPECT_NEAR(v, -std::pow(R, p - 2.0), 1e-13);
    for (double v : values_of(rhs_dual(ScalarField::constant(g, 1.0), config(2, p, FlowDirection::expanding_dual))))
      EXPECT_NEAR(v, -1.0, 1e-13);
  }
}

TEST(Rhs, RadialIsChainRuleOfDual) {
  const auto g = SphereGrid::circle(256);
  const auto cfg = config(2, 0.5, FlowDirection::expanding_radial);
  const auto r = support_to_radial(ellipsoid_support(g, {1.0, 1.5}));
  std::vector<double> inv(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) inv[k] = 1.0 / r[k];
  const auto dual = rhs_dual(ScalarField(g, inv), cfg);
  const auto radial = rhs_radial(r, cfg);
  for (std::size_t k = 0; k < r.size(); ++k) EXPECT_NEAR(radial[k], -r[k] * r[k] * dual[k], 1e-12);
  for (double v : values_of(rhs_radial(ScalarField::constant(g, 2.0), cfg))) EXPECT_NEAR(v, std::sqrt(2.0), 1e-12);
}

TEST(Rhs, RadialSpeedOfTranslatedBall) {
  // Boundary point r u moves with normal velocity R^p; its radial speed is R^p |x| / <x - v, u>.
  const auto g = SphereGrid::circle(128);
  const Vec3 v(0.3, 0.0, 0.0);
  const auto r = support_to_radial(translated_ball_support(g, 1.0, v));
  const auto speed = rhs_radial(r, config(2, 0.5, FlowDirection::expanding_radial));
  double spread = 0.0;
  for (std::size_t k = 0; k < g->size(); ++k) {
    const Vec3 u = g->node(k);
    const Vec3 normal = r[k] * u - v;
    EXPECT_NEAR(speed[k], 1.0 / normal.dot(u), 1e-10);
    spread = std::max(spread, std::abs(speed[k] - speed[0]));
  }
  EXPECT_GT(spread, 0.01);
}

TEST(Rhs, DualMatchesFiniteDifferenceOfDualizedPrimal) {
  const auto g = SphereGrid::circle(512);
  auto cfg = config(2, 0.5);
  const auto s0 = ellipsoid_support(g, {1.0, 1.5});
  const double dt = 1e-3;
  FlowState a = make_state(s0, cfg);
  advance_to(a, cfg, dt);
  FlowState b = make_state(s0, cfg);
  advance_to(b, cfg, 2 * dt);
  const auto d0 = polar_dual(ConvexBody(s0)).support();
  const auto d1 = polar_dual(a.body).support();
  const auto d2 = polar_dual(b.body).support();
  const auto rhs = rhs_dual(d1, config(2, 0.5, FlowDirection::expanding_dual));
  double worst = 0.0;
  for (std::size_t k = 0; k < g->size(); ++k) worst = std::max(worst, std::abs((d2[k] - d0[k]) / (2 * dt) - rhs[k]));
  EXPECT_LT(worst, 1e-4);
}

TEST(Step, SingleBallStep) {
  const auto g = SphereGrid::circle(256);
  auto cfg = config(2, 0.5);
  FlowState st = make_state(ScalarField::constant(g, 1.0), cfg);
  step(st, cfg, std::nullopt, 0.01);
  for (double v : st.variable.values()) EXPECT_NEAR(v, 1.010025, 1e-10);
  EXPECT_DOUBLE_EQ(st.t, 0.01);
}

TEST(Step, StableDtFormula) {
  const auto g = SphereGrid::circle(256);
  auto cfg = config(2, 0.5);
  const FlowState st = make_state(ScalarField::constant(g, 1.0), cfg);
  const auto tend = evaluate_tendency(st.body, st.variable, cfg);
  EXPECT_NEAR(tend.d_max, 0.5, 1e-13);
  const double h = 2.0 * oracle::pi / 256;
  EXPECT_NEAR(stable_dt(*g, tend.d_max, cfg), 0.2 * h * h / 0.5, 1e-18);
}

TEST(Step, ConstantPhiRescalesTime) {
  const auto g = SphereGrid::circle(128);
  const auto s0 = ellipsoid_support(g, {1.0, 1.4});
  auto one = config(2, 0.5);
  auto two = one;
  two.phi = Anisotropy::constant(2.0);
  FlowState a = make_state(s0, two), b = make_state(s0, one);
  advance_to(a, two, 0.1);
  advance_to(b, one, 0.2);
  EXPECT_LT(max_abs_diff(a.variable, b.variable), 1e-8);
}

TEST(Step, TranslationIsFrozen) {
  const auto g = SphereGrid::circle(128);
  const Vec3 v(0.3, 0.1, 0.0);
  auto cfg = config(2, 0.5);
  FlowState st = make_state(translated_ball_support(g, 1.0, v), cfg);
  advance_to(st, cfg, 1.0);
  const double R = oracle::ball_expanding(1.0, 0.5, 1.0);
  for (std::size_t k = 0; k < g->size(); ++k) EXPECT_NEAR(st.variable[k], R + v.dot(g->node(k)), 1e-10);
}

TEST(Step, ShrinkingBallHaltsBeforeExtinction) {
  const auto g = SphereGrid::circle(64);
  auto cfg = config(2, 0.5, FlowDirection::shrinking_primal);
  FlowState st = make_state(ScalarField::constant(g, 1.0), cfg);
  cfg.volume_floor = 1e-4 * st.body.volume();
  while (step(st, cfg) != StepStatus::extinct) {
  }
  const double T = oracle::ball_extinction(1.0, 0.5);
  EXPECT_NEAR(T, 2.0 / 3.0, 1e-15);
  EXPECT_LT(st.t, T);
  EXPECT_LT(st.body.volume(), cfg.volume_floor);
  EXPECT_NEAR(st.variable[0], oracle::ball_shrinking(1.0, 0.5, st.t), 1e-8);
}

TEST(Step, AdvanceToLandsExactly) {
  const auto g = SphereGrid::circle(64);
  auto cfg = config(2, 0.5);
  FlowState st = make_state(ScalarField::constant(g, 1.0), cfg);
  int calls = 0;
  advance_to(st, cfg, 0.3, std::nullopt, [&](const FlowState&) { ++calls; });
  EXPECT_EQ(st.t, 0.3);
  EXPECT_EQ(calls, st.step_count);
}

TEST(Step, DualAndRadialStatesRecoverPrimal) {
  const auto g = SphereGrid::circle(256);
  const auto s0 = ellipsoid_support(g, {1.0, 1.5});
  auto primal = config(2, 0.5);
  FlowState p = make_state(s0, primal);
  advance_to(p, primal, 0.2);
  for (auto d : {FlowDirection::expanding_dual, FlowDirection::expanding_radial}) {
    auto cfg = config(2, 0.5, d);
    const auto start = d == FlowDirection::expanding_dual ? polar_dual(ConvexBody(s0)).support() : support_to_radial(s0);
    FlowState st = make_state(start, cfg);
    advance_to(st, cfg, 0.2);
    EXPECT_LT(max_abs_diff(primal_body(st, cfg).support(), p.variable), 1e-6) << to_string(d);
  }
}

TEST(BallFormulas, MatchOdeIntegration) {
  for (double p : {0.25, 0.5, 0.75}) {
    const double num = oracle::integrate_ode([&](double r) { return std::pow(r, p); }, 1.0, 5.0, 20000);
    EXPECT_NEAR(oracle::ball_expanding(1.0, p, 5.0), num, 1e-10 * num);
    EXPECT_NEAR(ball_radius_expanding(1.0, p, 5.0), num, 1e-10 * num);
    const double sh = oracle::integrate_ode([&](double r) { return -std::pow(r, -p); }, 1.0, 0.3, 20000);
    EXPECT_NEAR(oracle::ball_shrinking(1.0, p, 0.3), sh, 1e-10);
    EXPECT_NEAR(ball_radius_shrinking(1.0, p, 0.3), sh, 1e-10);
    EXPECT_NEAR(ball_extinction_time(1.0, p), oracle::ball_extinction(1.0, p), 1e-15);
  }
}

TEST(FlowConfig, Validation) {
  auto c = config(2, 0.5);
  EXPECT_NO_THROW(c.validate());
  c.p = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = config(4, 0.5);
  EXPECT_THROW(c.validate(), ConfigError);
  c = config(2, 0.5, FlowDirection::shrinking_primal);
  c.volume_floor = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = config(2, 1.5);
  EXPECT_TRUE(c.outside_analysed_range());
  EXPECT_THROW(parse_direction("sideways"), ConfigError);
  EXPECT_EQ(parse_direction("expanding_dual"), FlowDirection::expanding_dual);
}

TEST(Verification, RescalingTrivialAndBall) {
  const auto g = SphereGrid::circle(128);
  auto cfg = config(2, 0.5);
  const auto s0 = ellipsoid_support(g, {1.0, 1.5});
  EXPECT_EQ(verify_rescaling_property(cfg, s0, 1.0, {0.1, 0.5}).max_defect, 0.0);
  EXPECT_LT(verify_rescaling_property(cfg, ScalarField::constant(g, 1.0), 3.0, {0.1, 0.5}).max_defect, 1e-9);
}

TEST(Verification, DualCrossCheckBall) {
  const auto g = SphereGrid::circle(128);
  EXPECT_LT(cross_check_dual(config(2, 0.5), ScalarField::constant(g, 1.0), {0.25, 0.5}).max_defect, 1e-9);
}
