#include "cflow/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "cflow/errors.hpp"
#include "cflow/field_interpolant.hpp"

namespace cflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kNewtonIterations = 60;
// Newton stops at kNewtonTolerance. When it stalls first (roundoff, or the
// finite-difference Jacobian on S^2) the best iterate is still accepted below
// the accept tolerance: r = s(z) / <u, z> is stationary in z, so its error is
// quadratic in the residual.
constexpr double kNewtonTolerance = 1e-13;
constexpr double kAcceptTolerance = 1e-9;
constexpr double kSphereAcceptTolerance = 1e-5;

void require_positive(const ScalarField& s, const char* what) {
  for (std::size_t k = 0; k < s.size(); ++k)
    if (!(s[k] > 0.0)) {
      std::ostringstream os;
      os << what << " must be positive (origin interior); value " << s[k] << " at node " << k;
      throw DomainError(os.str());
    }
}

// Orthonormal tangent pair at unit vector v.
std::pair<Vec3, Vec3> tangent_frame(const Vec3& v) {
  const Vec3 a = std::abs(v.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 b1 = (a - a.dot(v) * v).normalized();
  Vec3 b2 = v.cross(b1);
  return {b1, b2};
}

ScalarField radial_on_circle(const ScalarField& s) {
  const auto& grid = s.grid();
  const auto n = grid.size();
  const FieldInterpolant interp(s);
  const auto d = coordinate_derivatives(s);
  const double h = grid.h_theta();

  // psi(theta) = theta + atan(s'/s) is the polar angle of the boundary point with
  // normal angle theta; it is continuous and increasing since s > 0 and s + s'' > 0.
  auto psi = [&](double th, const FieldInterpolant::Jet1d& q) { return th + std::atan(q.ft / q.f); };
  std::vector<double> psi_nodes(n + 1);
  for (std::size_t k = 0; k < n; ++k) psi_nodes[k] = grid.theta(k) + std::atan(d.t[k] / s[k]);
  psi_nodes[n] = psi_nodes[0] + 2.0 * kPi;

  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    double target = psi_nodes[0] + std::fmod(grid.theta(j) - psi_nodes[0] + 4.0 * kPi, 2.0 * kPi);
    if (target >= psi_nodes[n]) target -= 2.0 * kPi;
    const auto up = std::upper_bound(psi_nodes.begin(), psi_nodes.end(), target);
    const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(up - psi_nodes.begin()), 1, n) - 1;
    double lo = k * h;
    double hi = lo + h;
    double th = lo + h * (target - psi_nodes[k]) / (psi_nodes[k + 1] - psi_nodes[k]);
    double residual = 0.0;
    int it = 0;
    for (; it < kNewtonIterations; ++it) {
      const auto q = interp.jet(th);
      residual = psi(th, q) - target;
      if (std::abs(residual) < kNewtonTolerance) break;
      (residual > 0.0 ? hi : lo) = th;
      const double slope = q.f * (q.f + q.ftt) / (q.f * q.f + q.ft * q.ft);
      double next = th - residual / slope;
      if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
      th = next;
    }
    if (!(std::abs(residual) < kAcceptTolerance))
      throw InterpolationFailure("boundary direction inversion failed at node " + std::to_string(j));
    r[j] = interp.jet(th).f / std::cos(th - grid.theta(j));
  }
  return ScalarField(s.grid_ptr(), std::move(r));
}

ScalarField radial_on_sphere(const ScalarField& s) {
  const auto& grid = s.grid();
  const FieldInterpolant interp(s);
  const auto d = coordinate_derivatives(s);
  const auto grad = ambient_gradient(grid, d);
  constexpr double max_step = 0.5;
  constexpr double fd = 1e-6;
  std::vector<double> r(grid.size());

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec3& u = grid.node(k);
    const auto [a1, a2] = tangent_frame(u);
    auto residual = [&](const Vec3& z) {
      const auto q = interp.sample(z);
      const Vec3 x = (q.value * z + q.gradient).normalized();
      return Eigen::Vector2d(x.dot(a1), x.dot(a2));
    };

    Vec3 z = (u - grad[k] / s[k]).normalized();
    Vec3 best_z = z;
    double best = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kNewtonIterations; ++it) {
      const Eigen::Vector2d f = residual(z);
      if (f.norm() < best) {
        best = f.norm();
        best_z = z;
      }
      if (best < kNewtonTolerance) break;
      const auto [b1, b2] = tangent_frame(z);
      auto moved = [&](double alpha, double beta) { return (z + alpha * b1 + beta * b2).normalized(); };
      Eigen::Matrix2d jac;
      jac.col(0) = (residual(moved(fd, 0.0)) - residual(moved(-fd, 0.0))) / (2.0 * fd);
      jac.col(1) = (residual(moved(0.0, fd)) - residual(moved(0.0, -fd))) / (2.0 * fd);
      const double det = jac.determinant();
      if (!(std::abs(det) > 1e-14)) break;
      Eigen::Vector2d step = jac.inverse() * f;
      if (step.norm() > max_step) step *= max_step / step.norm();
      // Backtrack until the residual decreases.
      Vec3 trial = moved(-step.x(), -step.y());
      int cut = 0;
      for (; cut < 30 && residual(trial).norm() >= f.norm(); ++cut) {
        step *= 0.5;
        trial = moved(-step.x(), -step.y());
      }
      if (cut == 30) break;
      z = trial;
    }
    z = best_z;
    if (!(best < kSphereAcceptTolerance))
      throw InterpolationFailure("boundary direction inversion failed at node " + std::to_string(k));
    r[k] = interp.value(z) / u.dot(z);
  }
  return ScalarField(s.grid_ptr(), std::move(r));
}

}  // namespace

double unit_ball_volume(int n) {
  if (n == 2) return kPi;
  if (n == 3) return 4.0 * kPi / 3.0;
  throw ConfigError("unit_ball_volume: unsupported dimension");
}

ConvexBody::ConvexBody(ScalarField support) : support_(std::move(support)) {
  require_positive(support_, "support function");
  const auto& g = grid();
  const int n = g.ambient_dim();
  derivs_ = coordinate_derivatives(support_);
  radii_ = assemble_radii(support_, covariant_hessian(g, derivs_));
  if (!radii_.strictly_convex)
    throw NonConvexError(radii_.worst_node, radii_.lambda_min[radii_.worst_node], radii_.threshold);

  grad_normsq_ = cflow::gradient_normsq(g, derivs_);
  const auto grad = ambient_gradient(g, derivs_);
  boundary_.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) boundary_[k] = support_[k] * g.node(k) + grad[k];

  const auto w = g.weights();
  double vol = 0.0;
  Vec3 moment = Vec3::Zero();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double dA = radii_.det[k] * w[k];
    vol += support_[k] * dA;
    moment += (support_[k] * dA) * boundary_[k];
  }
  volume_ = vol / n;
  centroid_ = moment / ((n + 1) * volume_);

  s_min_ = support_.min();
  s_max_ = support_.max();
  width_min_ = std::numeric_limits<double>::infinity();
  width_max_ = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double wk = support_[k] + support_[g.antipode(k)];
    width_min_ = std::min(width_min_, wk);
    width_max_ = std::max(width_max_, wk);
  }
}

std::vector<Vec3> boundary_points(const ScalarField& s) { return ConvexBody(s).boundary_points(); }

ScalarField support_to_radial(const ScalarField& s) {
  require_positive(s, "support function");
  radii_matrix(s);
  return s.grid().ambient_dim() == 2 ? radial_on_circle(s) : radial_on_sphere(s);
}

ConvexBody polar_dual(const ConvexBody& body) {
  const auto r = support_to_radial(body.support());
  std::vector<double> dual(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) dual[k] = 1.0 / r[k];
  return ConvexBody(ScalarField(body.grid_ptr(), std::move(dual)));
}

WidthsAndCentroid widths_and_centroid(const ConvexBody& body) {
  return {body.width_min(), body.width_max(), body.centroid()};
}

ConvexBody translated(const ConvexBody& body, const Vec3& b) {
  const auto& g = body.grid();
  std::vector<double> s(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) s[k] = body.support()[k] - b.dot(g.node(k));
  return ConvexBody(ScalarField(body.grid_ptr(), std::move(s)));
}

ConvexBody rescale_unit_volume(const ConvexBody& body) {
  const int n = body.ambient_dim();
  const double scale = std::pow(unit_ball_volume(n) / body.volume(), 1.0 / n);
  std::vector<double> s(body.support().values().begin(), body.support().values().end());
  for (double& v : s) v *= scale;
  return ConvexBody(ScalarField(body.grid_ptr(), std::move(s)));
}

KaltenbachReport kaltenbach_check(const ConvexBody& body) {
  const auto& g = body.grid();
  const int n = g.ambient_dim();
  const ConvexBody dual = polar_dual(body);

  std::vector<double> dual_factor(g.size());
  for (std::size_t k = 0; k < g.size(); ++k)
    dual_factor[k] = 1.0 / (dual.radii().det[k] * std::pow(dual.support()[k], n + 1));
  const FieldInterpolant dual_factor_at(ScalarField(body.grid_ptr(), dual_factor));
  const FieldInterpolant dual_support_at(dual.support());

  KaltenbachReport rep;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec3& x = body.boundary_points()[k];
    const double rx = x.norm();
    const Vec3 nu = x / rx;
    // x° = s°(nu) nu + grad s°(nu) and grad s° is orthogonal to x, so <x, x°> = |x| s°(nu).
    const double pairing = rx * dual_support_at.value(nu);
    rep.max_pairing_error = std::max(rep.max_pairing_error, std::abs(pairing - 1.0));
    const double primal = 1.0 / (body.radii().det[k] * std::pow(body.support()[k], n + 1));
    const double defect = std::abs(primal * dual_factor_at.value(nu) - 1.0);
    if (defect > rep.max_defect) {
      rep.max_defect = defect;
      rep.worst_node = k;
    }
  }
  if (rep.max_pairing_error > kPairingTolerance) {
    std::ostringstream os;
    os << "Kaltenbach pairing violated: max |<x, x°> - 1| = " << rep.max_pairing_error;
    throw InterpolationFailure(os.str());
  }
  return rep;
}

}  // namespace cflow
