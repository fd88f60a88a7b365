#include "cflow/field_interpolant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace cflow {

namespace {

constexpr int kSupport = 6;

// Centered quintic B-spline and its derivative.
void bspline5(double x, double& b, double& db) {
  const double t = std::abs(x);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  auto p4 = [](double y) { return y * y * y * y; };
  const double a = 3.0 - t;
  const double c = 2.0 - t;
  const double e = 1.0 - t;
  if (t < 1.0) {
    b = (a * p4(a) - 6.0 * c * p4(c) + 15.0 * e * p4(e)) / 120.0;
    db = -sign * (p4(a) - 6.0 * p4(c) + 15.0 * p4(e)) / 24.0;
  } else if (t < 2.0) {
    b = (a * p4(a) - 6.0 * c * p4(c)) / 120.0;
    db = -sign * (p4(a) - 6.0 * p4(c)) / 24.0;
  } else if (t < 3.0) {
    b = a * p4(a) / 120.0;
    db = -sign * p4(a) / 24.0;
  } else {
    b = 0.0;
    db = 0.0;
  }
}

// Replaces periodic samples by quintic B-spline coefficients.
void prefilter(const RealFft& fft, std::span<double> data) {
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(data, spec);
  const double len = static_cast<double>(fft.length());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(k) / len;
    spec[k] /= (66.0 + 52.0 * std::cos(w) + 2.0 * std::cos(2.0 * w)) / 120.0;
  }
  fft.inverse(spec, data);
}

}  // namespace

FieldInterpolant::FieldInterpolant(const ScalarField& f)
    : grid_(f.grid_ptr()), values_(f.values().begin(), f.values().end()) {
  if (grid_->ambient_dim() == 3) {
    build_sphere_coefficients();
    return;
  }
  const auto n = grid_->size();
  const auto& fft = grid_->fft();
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(values_, spec);
  const double nd = static_cast<double>(n);
  cos_coef_.resize(spec.size());
  sin_coef_.resize(spec.size());
  cos_coef_[0] = spec[0].real() / nd;
  sin_coef_[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    const bool nyquist = (k == n / 2);
    cos_coef_[k] = (nyquist ? 1.0 : 2.0) * spec[k].real() / nd;
    sin_coef_[k] = nyquist ? 0.0 : -2.0 * spec[k].imag() / nd;
  }
}

FieldInterpolant::Jet1d FieldInterpolant::jet(double theta) const {
  Jet1d out;
  out.f = cos_coef_[0];
  const std::complex<double> step = std::polar(1.0, theta);
  std::complex<double> e = 1.0;
  for (std::size_t k = 1; k < cos_coef_.size(); ++k) {
    // Refresh the rotation periodically so the recurrence does not drift.
    e = (k % 32 == 0) ? std::polar(1.0, static_cast<double>(k) * theta) : e * step;
    const double c = e.real();
    const double s = e.imag();
    const double kk = static_cast<double>(k);
    const double a = cos_coef_[k];
    const double b = sin_coef_[k];
    out.f += a * c + b * s;
    out.ft += kk * (b * c - a * s);
    out.ftt -= kk * kk * (a * c + b * s);
  }
  return out;
}

void FieldInterpolant::build_sphere_coefficients() {
  const auto& g = *grid_;
  const int nt = g.n_theta();
  const int np = g.n_phi();
  const int rows = 2 * nt;
  // Doubled torus: row i' >= nt continues over the pole, theta = (i' + 1/2) h in
  // (pi, 2 pi) is the point (2 pi - theta, phi + pi).
  spline_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(np), 0.0);
  for (int i = 0; i < rows; ++i) {
    const bool mirrored = i >= nt;
    const int src = mirrored ? rows - 1 - i : i;
    for (int j = 0; j < np; ++j) {
      const int jj = mirrored ? (j + np / 2) % np : j;
      spline_[static_cast<std::size_t>(i) * np + j] = values_[g.index(src, jj)];
    }
  }
  for (int i = 0; i < rows; ++i)
    prefilter(g.fft(), std::span<double>(spline_).subspan(static_cast<std::size_t>(i) * np, static_cast<std::size_t>(np)));
  const RealFft column_fft(static_cast<std::size_t>(rows));
  std::vector<double> column(static_cast<std::size_t>(rows));
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < rows; ++i) column[static_cast<std::size_t>(i)] = spline_[static_cast<std::size_t>(i) * np + j];
    prefilter(column_fft, column);
    for (int i = 0; i < rows; ++i) spline_[static_cast<std::size_t>(i) * np + j] = column[static_cast<std::size_t>(i)];
  }
}

FieldInterpolant::Sample FieldInterpolant::sample_sphere(double theta, double phi, bool with_gradient) const {
  const auto& g = *grid_;
  const int rows = 2 * g.n_theta();
  const int np = g.n_phi();
  const double ht = g.h_theta();
  const double hp = g.h_phi();

  const double u = theta / ht - 0.5;
  const int i0 = static_cast<int>(std::floor(u)) - 2;
  const double v = phi / hp;
  const int j0 = static_cast<int>(std::floor(v)) - 2;

  std::array<double, kSupport> wt{}, dwt{}, wp{}, dwp{};
  std::array<std::size_t, kSupport> cols{};
  for (int a = 0; a < kSupport; ++a) {
    bspline5(u - (i0 + a), wt[static_cast<std::size_t>(a)], dwt[static_cast<std::size_t>(a)]);
    bspline5(v - (j0 + a), wp[static_cast<std::size_t>(a)], dwp[static_cast<std::size_t>(a)]);
    cols[static_cast<std::size_t>(a)] = static_cast<std::size_t>(((j0 + a) % np + np) % np);
  }

  double val = 0.0;
  double d_theta = 0.0;
  double d_phi = 0.0;
  for (int a = 0; a < kSupport; ++a) {
    const int i = ((i0 + a) % rows + rows) % rows;
    const double* row = spline_.data() + static_cast<std::size_t>(i) * np;
    double row_val = 0.0;
    double row_dphi = 0.0;
    for (std::size_t b = 0; b < kSupport; ++b) {
      row_val += wp[b] * row[cols[b]];
      row_dphi += dwp[b] * row[cols[b]];
    }
    val += wt[static_cast<std::size_t>(a)] * row_val;
    d_theta += dwt[static_cast<std::size_t>(a)] * row_val;
    d_phi += wt[static_cast<std::size_t>(a)] * row_dphi;
  }

  Sample out;
  out.value = val;
  if (with_gradient) {
    d_theta /= ht;
    d_phi /= hp;
    const double st = std::sin(theta);
    const Vec3 e_theta(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -st);
    const Vec3 e_phi(-std::sin(phi), std::cos(phi), 0.0);
    out.gradient = d_theta * e_theta + (d_phi / st) * e_phi;
  }
  return out;
}

double FieldInterpolant::value(const Vec3& z) const {
  if (grid_->ambient_dim() == 2) return jet(std::atan2(z.y(), z.x())).f;
  const double theta = std::acos(std::clamp(z.z(), -1.0, 1.0));
  double phi = std::atan2(z.y(), z.x());
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return sample_sphere(theta, phi, false).value;
}

FieldInterpolant::Sample FieldInterpolant::sample(const Vec3& z) const {
  if (grid_->ambient_dim() == 2) {
    const double theta = std::atan2(z.y(), z.x());
    const auto j = jet(theta);
    return {j.f, j.ft * Vec3(-std::sin(theta), std::cos(theta), 0.0)};
  }
  const double theta = std::acos(std::clamp(z.z(), -1.0, 1.0));
  double phi = std::atan2(z.y(), z.x());
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return sample_sphere(theta, phi, true);
}

}  // namespace cflow
