#pragma once

#include <vector>

#include "cflow/sphere_grid.hpp"

namespace cflow {

/// Off-grid evaluation of a grid field.
///
/// S^1 uses the trigonometric interpolant (exact for band-limited data, so it is
/// consistent with the spectral derivatives). S^2 uses a tensor-product periodic
/// quintic B-spline on the doubled torus theta in [0, 2 pi), continued over the
/// poles by f(2 pi - theta, phi + pi); the interpolant is C^4, which keeps Newton
/// iterations on it well behaved.
class FieldInterpolant {
 public:
  explicit FieldInterpolant(const ScalarField& f);

  struct Sample {
    double value = 0.0;
    Vec3 gradient = Vec3::Zero();  // tangential, ambient components
  };

  double value(const Vec3& z) const;
  Sample sample(const Vec3& z) const;

  /// Circle only: value and first two derivatives in theta.
  struct Jet1d {
    double f = 0.0;
    double ft = 0.0;
    double ftt = 0.0;
  };
  Jet1d jet(double theta) const;

 private:
  void build_sphere_coefficients();
  Sample sample_sphere(double theta, double phi, bool with_gradient) const;

  GridPtr grid_;
  std::vector<double> values_;
  // Circle: f = a0 + sum_k (a_k cos k theta + b_k sin k theta), last term the Nyquist cosine.
  std::vector<double> cos_coef_;
  std::vector<double> sin_coef_;
  // Sphere: B-spline coefficients on the 2 N_theta x N_phi doubled grid.
  std::vector<double> spline_;
};

}  // namespace cflow
