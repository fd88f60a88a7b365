#include "cflow/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cflow/errors.hpp"

namespace cflow {

namespace {

constexpr double kPi = std::numbers::pi;

// Fejer's first rule on the midpoint nodes x_i = cos(theta_i); integrates
// polynomials in cos(theta) of degree < N_theta exactly, all weights positive.
std::vector<double> fejer_weights(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double th = (i + 0.5) * kPi / n;
    double acc = 0.0;
    for (int k = 1; k <= n / 2; ++k) acc += std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
    w[static_cast<std::size_t>(i)] = 2.0 / n * (1.0 - 2.0 * acc);
  }
  return w;
}

}  // namespace

Vec3 direction(int ambient_dim, double theta, double phi) {
  if (ambient_dim == 2) return {std::cos(theta), std::sin(theta), 0.0};
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

std::shared_ptr<const SphereGrid> SphereGrid::circle(int n) {
  if (n < 16) throw ConfigError("S^1 grid needs N >= 16, got " + std::to_string(n));
  if (n % 2 != 0) throw ConfigError("S^1 grid needs even N (antipodal closure), got " + std::to_string(n));

  std::shared_ptr<SphereGrid> g(new SphereGrid());
  g->dim_ = 2;
  g->n_theta_ = n;
  g->n_phi_ = 1;
  g->h_theta_ = 2.0 * kPi / n;
  g->h_phi_ = 0.0;
  const auto count = static_cast<std::size_t>(n);
  g->theta_.resize(count);
  g->phi_.assign(count, 0.0);
  g->nodes_.resize(count);
  g->weights_.assign(count, g->h_theta_);
  for (std::size_t k = 0; k < count; ++k) {
    g->theta_[k] = static_cast<double>(k) * g->h_theta_;
    g->nodes_[k] = direction(2, g->theta_[k]);
  }
  g->fft_ = std::make_unique<RealFft>(count);
  return g;
}

std::shared_ptr<const SphereGrid> SphereGrid::sphere(int n_theta, int n_phi) {
  if (n_theta < 16) throw ConfigError("S^2 grid needs N_theta >= 16, got " + std::to_string(n_theta));
  if (n_phi < 32) throw ConfigError("S^2 grid needs N_phi >= 32, got " + std::to_string(n_phi));
  if (n_phi % 2 != 0) throw ConfigError("S^2 grid needs even N_phi (pole reflection), got " + std::to_string(n_phi));

  std::shared_ptr<SphereGrid> g(new SphereGrid());
  g->dim_ = 3;
  g->n_theta_ = n_theta;
  g->n_phi_ = n_phi;
  g->h_theta_ = kPi / n_theta;
  g->h_phi_ = 2.0 * kPi / n_phi;
  const auto count = static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi);
  g->theta_.resize(count);
  g->phi_.resize(count);
  g->nodes_.resize(count);
  g->weights_.resize(count);
  const auto fejer = fejer_weights(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    const double th = (i + 0.5) * g->h_theta_;
    for (int j = 0; j < n_phi; ++j) {
      const auto k = g->index(i, j);
      const double ph = j * g->h_phi_;
      g->theta_[k] = th;
      g->phi_[k] = ph;
      g->nodes_[k] = direction(3, th, ph);
      g->weights_[k] = fejer[static_cast<std::size_t>(i)] * g->h_phi_;
    }
  }
  g->fft_ = std::make_unique<RealFft>(static_cast<std::size_t>(n_phi));
  return g;
}

double SphereGrid::h_min() const noexcept {
  return dim_ == 2 ? h_theta_ : std::min(h_theta_, h_phi_);
}

std::size_t SphereGrid::antipode(std::size_t k) const noexcept {
  if (dim_ == 2) return (k + size() / 2) % size();
  const int i = row(k);
  const int j = col(k);
  return index(n_theta_ - 1 - i, (j + n_phi_ / 2) % n_phi_);
}

std::string SphereGrid::describe() const {
  std::ostringstream os;
  if (dim_ == 2)
    os << "S1 N=" << n_theta_;
  else
    os << "S2 N_theta=" << n_theta_ << " N_phi=" << n_phi_;
  return os.str();
}

std::vector<int> SphereGrid::resolution() const {
  if (dim_ == 2) return {n_theta_};
  return {n_theta_, n_phi_};
}

GridPtr build_grid(int n, std::span<const int> resolution) {
  if (n == 2) {
    if (resolution.size() != 1) throw ConfigError("S^1 grid takes one resolution value");
    return SphereGrid::circle(resolution[0]);
  }
  if (n == 3) {
    if (resolution.size() != 2) throw ConfigError("S^2 grid takes two resolution values (N_theta, N_phi)");
    return SphereGrid::sphere(resolution[0], resolution[1]);
  }
  throw ConfigError("unsupported ambient dimension n=" + std::to_string(n) + " (expected 2 or 3)");
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ConfigError("ScalarField without grid");
  if (values_.size() != grid_->size())
    throw ConfigError("ScalarField has " + std::to_string(values_.size()) + " values for " +
                      std::to_string(grid_->size()) + " nodes");
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!std::isfinite(values_[k])) throw DomainError("non-finite field value at node " + std::to_string(k));
}

ScalarField ScalarField::constant(GridPtr grid, double value) {
  const auto n = grid->size();
  return ScalarField(std::move(grid), std::vector<double>(n, value));
}

ScalarField ScalarField::from_function(GridPtr grid, const std::function<double(const Vec3&)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(grid->node(k));
  return ScalarField(std::move(grid), std::move(v));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double integrate(const SphereGrid& grid, std::span<const double> values) {
  const auto w = grid.weights();
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) acc += values[k] * w[k];
  return acc;
}

double integrate(const ScalarField& f) { return integrate(f.grid(), f.values()); }

}  // namespace cflow
