#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "cflow/errors.hpp"
#include "cflow/run_config.hpp"
#include "cflow/snapshot.hpp"

using namespace cflow;

TEST(Snapshot, RoundTripIsExact) {
  for (const auto& g : {SphereGrid::circle(32), SphereGrid::sphere(16, 32)}) {
    const auto s = ScalarField::from_function(g, [](const Vec3& z) { return 1.0 + 0.1 * z.x() + std::exp(z.y()) / 3.0; });
    std::stringstream ss;
    write_snapshot(ss, s, 1.0 / 3.0);
    EXPECT_EQ(ss.str().find('\r'), std::string::npos);
    const auto back = read_snapshot(ss);
    EXPECT_EQ(back.t, 1.0 / 3.0);
    ASSERT_EQ(back.support.size(), s.size());
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(back.support[k], s[k]);
  }
}

TEST(Snapshot, HeaderLayout) {
  std::stringstream ss;
  write_snapshot(ss, ScalarField::constant(SphereGrid::sphere(16, 32), 1.0), 0.5);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "3,16,32,0.5");
}

TEST(Snapshot, RejectsMismatchedGrid) {
  std::stringstream ss;
  write_snapshot(ss, ScalarField::constant(SphereGrid::circle(16), 1.0), 0.0);
  std::string text = ss.str();
  text.replace(0, text.find('\n'), "2,18,0");
  std::stringstream bad(text);
  EXPECT_THROW(read_snapshot(bad), ConfigError);
  std::stringstream empty("");
  EXPECT_THROW(read_snapshot(empty), ConfigError);
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 12345.678})
    EXPECT_EQ(std::stod(format_double(v)), v);
}

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

const char* kBase = "n = 2\np = 0.5\nresolution = 64\nbody = ellipsoid 1 1.5\nt_end = 1\n";

}  // namespace

TEST(RunConfig, ParsesBaseConfig) {
  const auto c = parse(kBase);
  EXPECT_EQ(c.flow.n, 2);
  EXPECT_EQ(c.flow.p, 0.5);
  EXPECT_EQ(c.resolution, std::vector<int>{64});
  EXPECT_EQ(c.body.family, BodySpec::Family::ellipsoid);
  EXPECT_EQ(c.stop, StopRule::time);
  EXPECT_EQ(c.text, kBase);
}

TEST(RunConfig, ParsesPhiAndModes) {
  const auto c = parse("n = 3\np = 0.5\nresolution = 16 32\nbody = harmonic 1  # comment\nmodes = 2 0 0.05; 3 -2 0.01\n"
                       "phi = quadrupole 0.2 2\nstop = volume_growth\nvolume_growth = 100\n");
  EXPECT_EQ(c.body.modes.size(), 2u);
  EXPECT_EQ(c.body.modes[1].m, -2);
  EXPECT_EQ(c.flow.phi.family(), Anisotropy::Family::quadrupole);
  EXPECT_EQ(c.stop, StopRule::volume_growth);
}

TEST(RunConfig, Errors) {
  const std::string base = kBase;
  EXPECT_THROW(parse(base + "p = 0.3\n"), ConfigError);
  EXPECT_THROW(parse(base + "colour = red\n"), ConfigError);
  EXPECT_THROW(parse(base + "garbage\n"), ConfigError);
  EXPECT_THROW(parse("n = 2\nresolution = 64\nbody = ball 1\nt_end = 1\n"), ConfigError);
  EXPECT_THROW(parse("n = 4\np = 0.5\nresolution = 64\nbody = ball 1\nt_end = 1\n"), ConfigError);
  EXPECT_THROW(parse("n = 2\np = 0.5\nresolution = 63\nbody = ball 1\nt_end = 1\n"), ConfigError);
  EXPECT_THROW(parse("n = 2\np = 0.5\nresolution = 64\nbody = cube 1\nt_end = 1\n"), ConfigError);
  EXPECT_THROW(parse("n = 2\np = 0.5\nresolution = 64\nbody = harmonic 1\nmodes = 4 0 0.5\nt_end = 1\n"), ConfigError);
  EXPECT_THROW(parse("n = 2\np = 0.5\ndirection = shrinking_primal\nresolution = 64\nbody = ball 1\nt_end = 1\n"),
               ConfigError);
  EXPECT_THROW(parse(base + "phi = dipole 2 1 0\n"), ConfigError);
}

TEST(RunConfig, RecentersBodyWithoutInteriorOrigin) {
  const auto c = parse("n = 2\np = 0.5\nresolution = 64\nbody = translated_ball 1 1.5 0\nt_end = 1\n");
  bool recentered = false;
  const auto s = initial_support(c, build_grid(2, c.resolution), &recentered);
  EXPECT_TRUE(recentered);
  for (double v : s.values()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(RunConfig, SteinerPointOfTranslatedBall) {
  const auto g = SphereGrid::sphere(32, 64);
  const Vec3 v(0.2, -0.1, 0.3);
  EXPECT_LT((steiner_point(translated_ball_support(g, 1.0, v)) - v).norm(), 1e-8);
}
