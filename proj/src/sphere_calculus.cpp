#include "cflow/sphere_calculus.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace cflow {

namespace {

using cplx = std::complex<double>;

CoordinateDerivatives spectral_derivatives(const ScalarField& f) {
  const auto& grid = f.grid();
  const auto n = grid.size();
  const auto& fft = grid.fft();
  std::vector<cplx> spec(fft.spectrum_size());
  fft.forward(f.values(), spec);

  std::vector<cplx> d1(spec.size());
  std::vector<cplx> d2(spec.size());
  const std::size_t nyquist = n / 2;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double kk = static_cast<double>(k);
    d1[k] = (k == nyquist) ? cplx{} : cplx{0.0, kk} * spec[k];
    d2[k] = -kk * kk * spec[k];
  }

  CoordinateDerivatives d;
  d.t.resize(n);
  d.tt.resize(n);
  fft.inverse(d1, d.t);
  fft.inverse(d2, d.tt);
  return d;
}

// Value at (row, col) where row may run past either pole.
struct PoleReflectedRows {
  const SphereGrid& grid;
  std::span<const double> v;

  double operator()(int i, int j) const {
    const int nt = grid.n_theta();
    const int np = grid.n_phi();
    if (i < 0) {
      i = -i - 1;
      j += np / 2;
    } else if (i >= nt) {
      i = 2 * nt - i - 1;
      j += np / 2;
    }
    j %= np;
    if (j < 0) j += np;
    return v[grid.index(i, j)];
  }
};

constexpr double kD1[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr double kD2[5] = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};

std::vector<double> theta_stencil(const SphereGrid& grid, std::span<const double> v, const double (&w)[5],
                                  double scale) {
  PoleReflectedRows at{grid, v};
  std::vector<double> out(grid.size());
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int j = 0; j < grid.n_phi(); ++j) {
      double acc = 0.0;
      for (int m = 0; m < 5; ++m) acc += w[m] * at(i + m - 2, j);
      out[grid.index(i, j)] = acc * scale;
    }
  return out;
}

std::vector<double> phi_stencil(const SphereGrid& grid, std::span<const double> v, const double (&w)[5],
                                double scale) {
  const int np = grid.n_phi();
  std::vector<double> out(grid.size());
  for (int i = 0; i < grid.n_theta(); ++i) {
    const double* row = v.data() + grid.index(i, 0);
    for (int j = 0; j < np; ++j) {
      double acc = 0.0;
      for (int m = 0; m < 5; ++m) acc += w[m] * row[(j + m - 2 + np) % np];
      out[grid.index(i, j)] = acc * scale;
    }
  }
  return out;
}

CoordinateDerivatives finite_difference_derivatives(const ScalarField& f) {
  const auto& grid = f.grid();
  const double ht = grid.h_theta();
  const double hp = grid.h_phi();
  CoordinateDerivatives d;
  d.t = theta_stencil(grid, f.values(), kD1, 1.0 / ht);
  d.tt = theta_stencil(grid, f.values(), kD2, 1.0 / (ht * ht));
  d.p = phi_stencil(grid, f.values(), kD1, 1.0 / hp);
  d.pp = phi_stencil(grid, f.values(), kD2, 1.0 / (hp * hp));
  d.tp = theta_stencil(grid, d.p, kD1, 1.0 / ht);
  return d;
}

// Positive symbol of the negated five-point second difference at angle k h.
double second_difference_symbol(double kh) {
  return (30.0 - 32.0 * std::cos(kh) + 2.0 * std::cos(2.0 * kh)) / 12.0;
}

}  // namespace

CoordinateDerivatives coordinate_derivatives(const ScalarField& f) {
  return f.grid().ambient_dim() == 2 ? spectral_derivatives(f) : finite_difference_derivatives(f);
}

std::vector<SymMat2> covariant_hessian(const SphereGrid& grid, const CoordinateDerivatives& d) {
  std::vector<SymMat2> h(grid.size());
  if (grid.ambient_dim() == 2) {
    for (std::size_t k = 0; k < h.size(); ++k) h[k].xx = d.tt[k];
    return h;
  }
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double th = grid.theta(k);
    const double st = std::sin(th);
    const double ct = std::cos(th);
    h[k].xx = d.tt[k];
    h[k].xy = d.tp[k] - (ct / st) * d.p[k];
    h[k].yy = d.pp[k] + st * ct * d.t[k];
  }
  return h;
}

std::vector<SymMat2> covariant_hessian(const ScalarField& f) {
  return covariant_hessian(f.grid(), coordinate_derivatives(f));
}

std::vector<double> gradient_normsq(const SphereGrid& grid, const CoordinateDerivatives& d) {
  std::vector<double> g(grid.size());
  if (grid.ambient_dim() == 2) {
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = d.t[k] * d.t[k];
    return g;
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double st = std::sin(grid.theta(k));
    g[k] = d.t[k] * d.t[k] + d.p[k] * d.p[k] / (st * st);
  }
  return g;
}

ScalarField covariant_gradient_normsq(const ScalarField& f) {
  return ScalarField(f.grid_ptr(), gradient_normsq(f.grid(), coordinate_derivatives(f)));
}

std::vector<Vec3> ambient_gradient(const SphereGrid& grid, const CoordinateDerivatives& d) {
  std::vector<Vec3> g(grid.size());
  if (grid.ambient_dim() == 2) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double th = grid.theta(k);
      g[k] = d.t[k] * Vec3(-std::sin(th), std::cos(th), 0.0);
    }
    return g;
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double th = grid.theta(k);
    const double ph = grid.phi(k);
    const double st = std::sin(th);
    const Vec3 e_theta(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -st);
    const Vec3 e_phi(-std::sin(ph), std::cos(ph), 0.0);
    g[k] = d.t[k] * e_theta + (d.p[k] / st) * e_phi;
  }
  return g;
}

int polar_filter_cutoff(const SphereGrid& grid, int row) {
  const int np = grid.n_phi();
  if (grid.ambient_dim() == 2) return 0;
  const double hp = grid.h_phi();
  const double st = std::sin(grid.row_theta(row));
  const double limit = second_difference_symbol(std::numbers::pi) * st * st;
  int keep = 0;
  for (int m = 1; m <= np / 2; ++m) {
    if (second_difference_symbol(m * hp) > limit) break;
    keep = m;
  }
  return keep;
}

void polar_filter(const SphereGrid& grid, std::span<double> values) {
  if (grid.ambient_dim() == 2) return;
  const int np = grid.n_phi();
  const auto& fft = grid.fft();
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  for (int i = 0; i < grid.n_theta(); ++i) {
    const int keep = polar_filter_cutoff(grid, i);
    if (keep >= np / 2) continue;
    auto row = values.subspan(grid.index(i, 0), static_cast<std::size_t>(np));
    fft.forward(row, spec);
    for (std::size_t m = static_cast<std::size_t>(keep) + 1; m < spec.size(); ++m) spec[m] = {};
    fft.inverse(spec, row);
  }
}

}  // namespace cflow
