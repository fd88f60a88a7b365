#include "cflow/radii.hpp"

#include <algorithm>
#include <cmath>

#include "cflow/errors.hpp"

namespace cflow {

double RadiiField::mean_curvature(std::size_t k) const {
  if (grid->ambient_dim() == 2) return 1.0 / lambda_min[k];
  return 1.0 / lambda_min[k] + 1.0 / lambda_max[k];
}

RadiiField assemble_radii(const ScalarField& s, const std::vector<SymMat2>& hessian) {
  const auto& grid = s.grid();
  const auto n = grid.size();
  RadiiField r;
  r.grid = s.grid_ptr();
  r.tensor.resize(n);
  r.lambda_min.resize(n);
  r.lambda_max.resize(n);
  r.det.resize(n);

  if (grid.ambient_dim() == 2) {
    for (std::size_t k = 0; k < n; ++k) {
      const double v = hessian[k].xx + s[k];
      r.tensor[k].xx = v;
      r.lambda_min[k] = r.lambda_max[k] = r.det[k] = v;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const double st = std::sin(grid.theta(k));
      SymMat2 t = hessian[k];
      t.xx += s[k];
      t.yy += s[k] * st * st;
      r.tensor[k] = t;
      // Orthonormal frame (e_theta, e_phi): divide by sqrt(g_ii g_jj).
      const double a = t.xx;
      const double b = t.xy / st;
      const double c = t.yy / (st * st);
      const double half_tr = 0.5 * (a + c);
      const double disc = std::hypot(0.5 * (a - c), b);
      const double det = a * c - b * b;
      double lmax = half_tr + disc;
      double lmin = half_tr - disc;
      // Recover the small root from the product when the difference cancels.
      if (lmax > 0.0 && std::abs(lmin) < 1e-3 * std::abs(lmax)) lmin = det / lmax;
      r.lambda_min[k] = lmin;
      r.lambda_max[k] = lmax;
      r.det[k] = det;
    }
  }

  const auto worst = std::min_element(r.lambda_min.begin(), r.lambda_min.end());
  r.worst_node = static_cast<std::size_t>(worst - r.lambda_min.begin());
  const double largest = *std::max_element(r.lambda_max.begin(), r.lambda_max.end());
  r.threshold = kConvexityRatio * std::max(largest, 0.0);
  r.strictly_convex = largest > 0.0 && *worst > r.threshold;
  return r;
}

RadiiField radii_matrix(const ScalarField& s) {
  auto r = assemble_radii(s, covariant_hessian(s));
  if (!r.strictly_convex) throw NonConvexError(r.worst_node, r.lambda_min[r.worst_node], r.threshold);
  return r;
}

double speed_G(std::span<const double> lambdas, double p) {
  if (lambdas.empty()) throw DomainError("speed_G needs at least one eigenvalue");
  double prod = 1.0;
  for (double l : lambdas) {
    if (!(l > 0.0)) throw DomainError("speed_G is defined on the positive cone only");
    prod *= l;
  }
  return std::pow(prod, p / static_cast<double>(lambdas.size()));
}

}  // namespace cflow
