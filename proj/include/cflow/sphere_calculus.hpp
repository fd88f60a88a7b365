#pragma once

#include <span>
#include <vector>

#include "cflow/sphere_grid.hpp"

namespace cflow {

/// Symmetric 2x2 tensor in the coordinate frame (d_theta, d_phi). On S^1
/// only xx is meaningful.
struct SymMat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Coordinate partial derivatives of a field. S^1 leaves the phi entries empty.
struct CoordinateDerivatives {
  std::vector<double> t;
  std::vector<double> p;
  std::vector<double> tt;
  std::vector<double> tp;
  std::vector<double> pp;
};

/// S^1: spectral differentiation. S^2: fourth-order central differences with
/// phi periodic and across-pole ghost rows f(-theta, phi) = f(theta, phi + pi).
CoordinateDerivatives coordinate_derivatives(const ScalarField& f);

/// Covariant Hessian with respect to the round metric, per node:
///   H_tt = f_tt,  H_tp = f_tp - cot(theta) f_p,  H_pp = f_pp + sin(theta) cos(theta) f_t.
std::vector<SymMat2> covariant_hessian(const ScalarField& f);
std::vector<SymMat2> covariant_hessian(const SphereGrid& grid, const CoordinateDerivatives& d);

/// |grad f|^2 in the round metric.
ScalarField covariant_gradient_normsq(const ScalarField& f);
std::vector<double> gradient_normsq(const SphereGrid& grid, const CoordinateDerivatives& d);

/// Gradient lifted to the ambient tangent space at each node.
std::vector<Vec3> ambient_gradient(const SphereGrid& grid, const CoordinateDerivatives& d);

/// Removes, row by row, longitudinal Fourier modes whose effective stiffness
/// f_pp / sin^2(theta) would exceed the equatorial Nyquist stiffness of the
/// difference stencil. No-op on S^1. Rows where every mode survives are left
/// untouched (bitwise).
void polar_filter(const SphereGrid& grid, std::span<double> values);

/// Number of longitudinal modes kept at latitude row i by polar_filter().
int polar_filter_cutoff(const SphereGrid& grid, int row);

}  // namespace cflow
