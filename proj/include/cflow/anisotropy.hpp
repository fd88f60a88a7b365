#pragma once

#include <string>

#include "cflow/sphere_grid.hpp"

namespace cflow {

/// Positive weight Phi on unit vectors, from a closed-form family. Stored
/// symbolically so it can be evaluated at arbitrary directions.
class Anisotropy {
 public:
  enum class Family { constant, dipole, quadrupole };

  Anisotropy() = default;

  /// Phi(z) = c, c > 0.
  static Anisotropy constant(double c);
  /// Phi(z) = 1 + eps <v, z>, requires |eps| |v| < 1.
  static Anisotropy dipole(double eps, const Vec3& v);
  /// Phi(z) = 1 + eps (z_axis^2 - 1/n), axis in [0, n).
  static Anisotropy quadrupole(double eps, int axis, int n);

  double operator()(const Vec3& z) const;

  /// Analytic infimum over the sphere.
  double infimum() const;

  Family family() const noexcept { return family_; }
  bool is_constant() const noexcept { return family_ == Family::constant; }
  bool is_unit() const noexcept { return family_ == Family::constant && c_ == 1.0; }
  std::string describe() const;

 private:
  Family family_ = Family::constant;
  double c_ = 1.0;
  double eps_ = 0.0;
  Vec3 v_ = Vec3::Zero();
  int axis_ = 0;
  int n_ = 3;
};

}  // namespace cflow
