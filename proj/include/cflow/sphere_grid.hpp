#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cflow/real_fft.hpp"

namespace cflow {

using Vec3 = Eigen::Vector3d;

/// Discretization of the unit circle (n = 2) or unit sphere (n = 3).
///
/// S^1 nodes sit at theta_k = 2 pi k / N. S^2 nodes use the pole-free shifted
/// latitude-longitude grid theta_i = (i + 1/2) pi / N_theta, phi_j = 2 pi j / N_phi,
/// stored row-major by latitude. In R^2 the third component of every node is 0.
///
/// Grids are immutable after construction and are shared through GridPtr.
class SphereGrid {
 public:
  static std::shared_ptr<const SphereGrid> circle(int n);
  static std::shared_ptr<const SphereGrid> sphere(int n_theta, int n_phi);

  int ambient_dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  // S^1: n_theta() == N and n_phi() == 1.
  int n_theta() const noexcept { return n_theta_; }
  int n_phi() const noexcept { return n_phi_; }
  double h_theta() const noexcept { return h_theta_; }
  double h_phi() const noexcept { return h_phi_; }
  // Spacing entering the parabolic step bound.
  double h_min() const noexcept;

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_phi_) + static_cast<std::size_t>(j);
  }
  int row(std::size_t k) const noexcept { return static_cast<int>(k / static_cast<std::size_t>(n_phi_)); }
  int col(std::size_t k) const noexcept { return static_cast<int>(k % static_cast<std::size_t>(n_phi_)); }

  double theta(std::size_t k) const noexcept { return theta_[k]; }
  double phi(std::size_t k) const noexcept { return phi_[k]; }
  double row_theta(int i) const noexcept { return (dim_ == 2 ? i : i + 0.5) * h_theta_; }

  const Vec3& node(std::size_t k) const noexcept { return nodes_[k]; }
  std::span<const Vec3> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Index of the node at -z.
  std::size_t antipode(std::size_t k) const noexcept;

  /// Transform along one latitude circle (length N on S^1, N_phi on S^2).
  const RealFft& fft() const noexcept { return *fft_; }

  std::string describe() const;
  std::vector<int> resolution() const;

 private:
  SphereGrid() = default;

  int dim_ = 2;
  int n_theta_ = 0;
  int n_phi_ = 1;
  double h_theta_ = 0.0;
  double h_phi_ = 0.0;
  std::vector<double> theta_;
  std::vector<double> phi_;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
  std::unique_ptr<RealFft> fft_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Validates (n, resolution) and builds the grid. resolution = {N} for n = 2,
/// {N_theta, N_phi} for n = 3.
GridPtr build_grid(int n, std::span<const int> resolution);

/// Unit vector for intrinsic coordinates (theta only for n = 2).
Vec3 direction(int ambient_dim, double theta, double phi = 0.0);

/// One real value per grid node; values must be finite.
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values);

  static ScalarField constant(GridPtr grid, double value);
  static ScalarField from_function(GridPtr grid, const std::function<double(const Vec3&)>& f);

  const SphereGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  double min() const;
  double max() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Quadrature sum_k f_k w_k in node order.
double integrate(const ScalarField& f);
double integrate(const SphereGrid& grid, std::span<const double> values);

}  // namespace cflow
