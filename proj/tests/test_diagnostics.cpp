#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "cflow/diagnostics.hpp"
#include "cflow/errors.hpp"
#include "cflow/flow.hpp"
#include "cflow/run_config.hpp"
#include "oracles.hpp"

using namespace cflow;

TEST(Record, Ball) {
  const auto g = SphereGrid::circle(64);
  const auto r = record(ConvexBody(ScalarField::constant(g, 2.0)), 0.5, 0.01, Anisotropy(), 0.5);
  EXPECT_DOUBLE_EQ(r.ratio, 1.0);
  EXPECT_NEAR(r.osc, 0.0, 1e-14);
  EXPECT_NEAR(r.grad_sup, 0.0, 1e-12);
  EXPECT_NEAR(r.K_min, 0.5, 1e-13);
  EXPECT_NEAR(r.K_max, 0.5, 1e-13);
  EXPECT_NEAR(r.dev_unit, 0.0, 1e-13);
  EXPECT_NEAR(r.width_minus, 4.0, 1e-13);
  EXPECT_NEAR(r.width_plus, 4.0, 1e-13);
}

TEST(Record, TranslatedBall) {
  const auto g = SphereGrid::circle(64);
  const Vec3 v(0.5, 0.0, 0.0);
  const auto r = record(ConvexBody(translated_ball_support(g, 1.0, v)), 0.0, 0.0, Anisotropy(), 0.5);
  EXPECT_NEAR(r.osc, 1.0, 1e-13);
  EXPECT_NEAR(r.ratio, 1.5 / 0.5, 1e-12);
  EXPECT_NEAR(r.K_min, 1.0, 1e-12);
  EXPECT_NEAR(r.K_max, 1.0, 1e-12);
}

TEST(Record, EllipseCurvatureExtrema) {
  const auto g = SphereGrid::circle(256);
  const auto r = record(ConvexBody(ellipsoid_support(g, {1.0, 2.0})), 0.0, 0.0, Anisotropy(), 0.5);
  EXPECT_NEAR(r.kappa_max, 1.0 / oracle::ellipse_radius_of_curvature(1.0, 2.0, oracle::pi / 2), 1e-10);
  EXPECT_NEAR(r.kappa_max, 2.0, 1e-10);
  EXPECT_NEAR(r.kappa_min, 0.25, 1e-10);
}

TEST(Csv, RoundTripAndColumns) {
  const auto g = SphereGrid::sphere(16, 32);
  const auto rec = record(ConvexBody(ellipsoid_support(g, {1.0, 1.1, 1.2})), 0.25, 1e-3, Anisotropy(), 0.5);
  std::stringstream ss;
  write_csv_header(ss, 3);
  write_csv_row(ss, rec);
  EXPECT_EQ(ss.str().find('\r'), std::string::npos);
  const auto back = read_csv(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].n, 3);
  EXPECT_EQ(back[0].V, rec.V);
  EXPECT_EQ(back[0].centroid.z(), rec.centroid.z());
  EXPECT_EQ(back[0].tso_min, rec.tso_min);
  EXPECT_EQ(csv_columns(2).size() + 1, csv_columns(3).size());
}

TEST(Csv, MissingColumnsAreNamed) {
  std::stringstream ss("t,dt,V\n0,0,1\n");
  try {
    read_csv(ss);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("kappa_max"), std::string::npos);
  }
}

namespace {

std::vector<DiagnosticsRecord> ball_trajectory(double t_end, double R0 = 1.0, Vec3 v = Vec3::Zero()) {
  const auto g = SphereGrid::circle(64);
  FlowConfig cfg;
  cfg.t_end = t_end;
  std::vector<DiagnosticsRecord> traj;
  FlowState st = make_state(translated_ball_support(g, R0, v), cfg);
  traj.push_back(record(st.body, 0.0, 0.0, cfg.phi, cfg.p));
  for (int k = 1; k <= 40; ++k) {
    advance_to(st, cfg, t_end * k / 40.0);
    traj.push_back(record(st.body, st.t, st.dt_last, cfg.phi, cfg.p));
  }
  return traj;
}

}  // namespace

TEST(Bounds, BallPassesEverything) {
  const auto traj = ball_trajectory(6.0);
  EXPECT_TRUE(check_record_invariants(traj).pass);
  EXPECT_TRUE(check_gradient_bound(traj).pass);
  EXPECT_TRUE(check_oscillation(traj).pass);
  const auto ratio = check_ratio_convergence(traj);
  EXPECT_TRUE(ratio.pass && !ratio.skipped);
  for (const auto& r : check_curvature_bounds(traj, 0.5, default_burn_in(traj))) EXPECT_TRUE(r.pass) << r.name;
  EXPECT_TRUE(check_unit_ball_convergence(traj).pass);
}

TEST(Bounds, TranslatedBallOscillationIsConstant) {
  const Vec3 v(0.3, 0.0, 0.0);
  const auto traj = ball_trajectory(6.0, 1.0, v);
  for (const auto& r : traj) EXPECT_NEAR(r.osc, 0.6, 1e-8);
  EXPECT_TRUE(check_oscillation(traj).pass);
  const double R = oracle::ball_expanding(1.0, 0.5, 6.0);
  EXPECT_NEAR(traj.back().ratio, (R + 0.3) / (R - 0.3), 1e-9);
}

TEST(Bounds, ShortRunsAreSkipped) {
  const auto traj = ball_trajectory(0.5);
  const auto r = check_ratio_convergence(traj);
  EXPECT_TRUE(r.skipped);
  EXPECT_TRUE(r.pass);
}

TEST(Bounds, DetectsViolations) {
  auto traj = ball_trajectory(6.0, 1.0, Vec3(0.3, 0.0, 0.0));
  traj[20].osc *= 2.0;
  EXPECT_FALSE(check_oscillation(traj).pass);
  traj[20].ratio = 0.5;
  EXPECT_FALSE(check_record_invariants(traj).pass);
  auto w = traj;
  w[0].width_ratio = 1.0;
  w[5].width_ratio = 1.2;
  EXPECT_FALSE(check_width_ratio(w).pass);
}

TEST(Minkowski, EllipseInclusion) {
  const auto g = SphereGrid::circle(256);
  const auto rep = check_minkowski_inclusion(ConvexBody(ellipsoid_support(g, {1.0, 3.0})));
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.measured, 0.0);
}
