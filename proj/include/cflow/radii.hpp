#pragma once

#include <span>
#include <vector>

#include "cflow/sphere_calculus.hpp"

namespace cflow {

/// Radii-of-curvature tensor r_ij = Hess(s)_ij + s g_ij and its invariants,
/// one entry per node. Eigenvalues are taken relative to the round metric.
struct RadiiField {
  GridPtr grid;
  std::vector<SymMat2> tensor;     // coordinate frame
  std::vector<double> lambda_min;  // smallest principal radius
  std::vector<double> lambda_max;  // largest principal radius (== lambda_min on S^1)
  std::vector<double> det;         // S_{n-1} = det_g r

  double threshold = 0.0;  // convexity threshold on lambda_min
  bool strictly_convex = false;
  std::size_t worst_node = 0;  // argmin of lambda_min

  std::size_t size() const noexcept { return det.size(); }
  double gauss_curvature(std::size_t k) const { return 1.0 / det[k]; }
  double kappa_min(std::size_t k) const { return 1.0 / lambda_max[k]; }
  double kappa_max(std::size_t k) const { return 1.0 / lambda_min[k]; }
  double mean_curvature(std::size_t k) const;
};

/// Relative convexity threshold: lambda_1 > kConvexityRatio * max lambda_{n-1}.
inline constexpr double kConvexityRatio = 1e-8;

/// Builds the field from a support function and its covariant Hessian; never throws
/// on non-convexity (inspect strictly_convex).
RadiiField assemble_radii(const ScalarField& s, const std::vector<SymMat2>& hessian);

/// As assemble_radii() but throws NonConvexError naming the worst node.
RadiiField radii_matrix(const ScalarField& s);

/// G(lambda) = (prod lambda_i)^(p / (n-1)) with n - 1 = lambdas.size().
double speed_G(std::span<const double> lambdas, double p);

}  // namespace cflow
