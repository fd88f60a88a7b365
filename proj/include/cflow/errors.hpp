#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cflow {

/// Rejected grid, flow or run parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its domain (non-positive support, radii, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The smallest principal radius of curvature fell below the convexity threshold.
class NonConvexError : public std::runtime_error {
 public:
  NonConvexError(std::size_t node, double lambda_min, double threshold);

  std::size_t node() const noexcept { return node_; }
  double lambda_min() const noexcept { return lambda_min_; }
  double threshold() const noexcept { return threshold_; }

 private:
  std::size_t node_;
  double lambda_min_;
  double threshold_;
};

/// Boundary directions could not be inverted onto a grid direction.
class InterpolationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time step could not be completed even after repeated halving.
class IntegrationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cflow
