#pragma once

#include <vector>

#include "cflow/radii.hpp"
#include "cflow/sphere_grid.hpp"

namespace cflow {

/// Smooth strictly convex body with the origin in its interior, represented by
/// its support function on a SphereGrid. All derived quantities are computed at
/// construction; the object is immutable afterwards.
class ConvexBody {
 public:
  /// Throws DomainError if s <= 0 somewhere, NonConvexError if not strictly convex.
  explicit ConvexBody(ScalarField support);

  const ScalarField& support() const noexcept { return support_; }
  const SphereGrid& grid() const noexcept { return support_.grid(); }
  const GridPtr& grid_ptr() const noexcept { return support_.grid_ptr(); }
  int ambient_dim() const noexcept { return grid().ambient_dim(); }

  const RadiiField& radii() const noexcept { return radii_; }
  const CoordinateDerivatives& derivatives() const noexcept { return derivs_; }
  /// |grad s|^2 per node.
  const std::vector<double>& gradient_normsq() const noexcept { return grad_normsq_; }
  /// x = s z + grad s per node.
  const std::vector<Vec3>& boundary_points() const noexcept { return boundary_; }

  double volume() const noexcept { return volume_; }
  double support_min() const noexcept { return s_min_; }
  double support_max() const noexcept { return s_max_; }
  double width_min() const noexcept { return width_min_; }
  double width_max() const noexcept { return width_max_; }
  const Vec3& centroid() const noexcept { return centroid_; }

 private:
  ScalarField support_;
  CoordinateDerivatives derivs_;
  RadiiField radii_;
  std::vector<double> grad_normsq_;
  std::vector<Vec3> boundary_;
  double volume_ = 0.0;
  double s_min_ = 0.0;
  double s_max_ = 0.0;
  double width_min_ = 0.0;
  double width_max_ = 0.0;
  Vec3 centroid_ = Vec3::Zero();
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Points s z + grad s of the boundary, one per node. Throws NonConvexError.
std::vector<Vec3> boundary_points(const ScalarField& s);

/// Radial function r(u) at the grid directions: the boundary point with
/// direction u is located by Newton iteration on the off-grid interpolant of s,
/// and r(u) = s(z) / <u, z> at the located normal z.
ScalarField support_to_radial(const ScalarField& s);

/// K° with support function 1 / r_K.
ConvexBody polar_dual(const ConvexBody& body);

struct WidthsAndCentroid {
  double minus = 0.0;
  double plus = 0.0;
  Vec3 centroid = Vec3::Zero();
};
WidthsAndCentroid widths_and_centroid(const ConvexBody& body);

/// K - b, i.e. support s(z) - <b, z>.
ConvexBody translated(const ConvexBody& body, const Vec3& b);

/// (V(B) / V(K))^(1/n) K.
ConvexBody rescale_unit_volume(const ConvexBody& body);

struct KaltenbachReport {
  double max_defect = 0.0;         // max |product - 1|
  double max_pairing_error = 0.0;  // max |<x, x°> - 1|
  std::size_t worst_node = 0;
};

/// Pairs each boundary point x(z) with the dual boundary point whose normal is
/// x / |x| and returns the largest deviation of
///   (K / s^(n+1))(x) * (K° / s°^(n+1))(x°)
/// from 1. Throws InterpolationFailure if the pairing <x, x°> = 1 is violated
/// by more than kPairingTolerance.
KaltenbachReport kaltenbach_check(const ConvexBody& body);

inline constexpr double kPairingTolerance = 1e-6;

}  // namespace cflow
