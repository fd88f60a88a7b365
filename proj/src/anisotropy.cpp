#include "cflow/anisotropy.hpp"

#include <cmath>
#include <sstream>

#include "cflow/errors.hpp"

namespace cflow {

Anisotropy Anisotropy::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("constant anisotropy must be positive");
  Anisotropy a;
  a.family_ = Family::constant;
  a.c_ = c;
  return a;
}

Anisotropy Anisotropy::dipole(double eps, const Vec3& v) {
  if (!(std::abs(eps) * v.norm() < 1.0)) throw ConfigError("dipole anisotropy needs |eps| |v| < 1");
  Anisotropy a;
  a.family_ = Family::dipole;
  a.eps_ = eps;
  a.v_ = v;
  return a;
}

Anisotropy Anisotropy::quadrupole(double eps, int axis, int n) {
  if (n != 2 && n != 3) throw ConfigError("quadrupole anisotropy needs n in {2, 3}");
  if (axis < 0 || axis >= n) throw ConfigError("quadrupole axis out of range");
  Anisotropy a;
  a.family_ = Family::quadrupole;
  a.eps_ = eps;
  a.axis_ = axis;
  a.n_ = n;
  if (!(a.infimum() > 0.0)) throw ConfigError("quadrupole anisotropy is not positive on the sphere");
  return a;
}

double Anisotropy::operator()(const Vec3& z) const {
  switch (family_) {
    case Family::constant:
      return c_;
    case Family::dipole:
      return 1.0 + eps_ * v_.dot(z);
    case Family::quadrupole: {
      const double zk = z[axis_];
      return 1.0 + eps_ * (zk * zk - 1.0 / n_);
    }
  }
  return c_;
}

double Anisotropy::infimum() const {
  switch (family_) {
    case Family::constant:
      return c_;
    case Family::dipole:
      return 1.0 - std::abs(eps_) * v_.norm();
    case Family::quadrupole:
      return eps_ >= 0.0 ? 1.0 - eps_ / n_ : 1.0 + eps_ * (1.0 - 1.0 / n_);
  }
  return c_;
}

std::string Anisotropy::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case Family::constant:
      os << "constant(" << c_ << ")";
      break;
    case Family::dipole:
      os << "dipole(eps=" << eps_ << ", v=" << v_.x() << "," << v_.y() << "," << v_.z() << ")";
      break;
    case Family::quadrupole:
      os << "quadrupole(eps=" << eps_ << ", axis=" << axis_ << ")";
      break;
  }
  return os.str();
}

}  // namespace cflow
