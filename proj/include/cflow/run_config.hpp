#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cflow/flow.hpp"

namespace cflow {

/// Angular mode of a harmonic perturbation. n = 2: m >= 0 selects cos(l theta),
/// m < 0 selects sin(l theta). n = 3: real orthonormal spherical harmonic Y_lm.
struct HarmonicMode {
  int l = 0;
  int m = 0;
  double amplitude = 0.0;
};

struct BodySpec {
  enum class Family { ball, translated_ball, ellipsoid, harmonic };
  Family family = Family::ball;
  double radius = 1.0;
  Vec3 offset = Vec3::Zero();
  std::vector<double> axes;
  std::vector<HarmonicMode> modes;

  std::string describe() const;
};

enum class StopRule { time, volume_growth };

/// Line-oriented `key = value` run description; `#` starts a comment.
struct RunConfig {
  FlowConfig flow;
  std::vector<int> resolution;
  BodySpec body;
  StopRule stop = StopRule::time;
  double volume_growth = 0.0;  // stop once V >= volume_growth * V(0)
  // Shrinking flow: volume floor as a fraction of V(0), used when volume_floor is unset.
  double volume_floor_fraction = 0.0;
  int csv_every = 1;           // every k-th accepted step
  double csv_interval = 0.0;   // > 0: rows at exact multiples of this time instead
  int snapshot_every = 0;      // 0: initial and final snapshots only
  double snapshot_interval = 0.0;
  std::uint64_t seed = 1;
  std::string text;  // verbatim source, echoed into run_meta
};

/// Parses and validates. Throws ConfigError with the offending line.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// Samples the initial body's support function. If the origin is not interior,
/// the body is translated by its Steiner point first (`recentered` is set).
/// Throws ConfigError when the result is not strictly convex.
ScalarField initial_support(const RunConfig& cfg, const GridPtr& grid, bool* recentered = nullptr);

/// Closed-form support functions.
ScalarField ellipsoid_support(const GridPtr& grid, const std::vector<double>& axes);
ScalarField translated_ball_support(const GridPtr& grid, double radius, const Vec3& offset);
double harmonic_basis(int n, int l, int m, const Vec3& z);

/// Steiner point (1 / V(B)) * integral of s(u) u over the sphere.
Vec3 steiner_point(const ScalarField& s);

}  // namespace cflow
