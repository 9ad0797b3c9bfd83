#include "torreg/geometry.hpp"

#include <algorithm>
#include <string>

#include "torreg/error.hpp"

namespace torreg {

UnitComplex::UnitComplex(std::complex<double> z) {
  const double m = std::abs(z);
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw DomainError("UnitComplex requires a finite nonzero complex value");
  }
  z_ = z / m;
}

TorusGeometry::TorusGeometry(double major, double minor) : major_(major), minor_(minor) {
  if (!(minor > 0.0) || !std::isfinite(major) || !std::isfinite(minor)) {
    throw DomainError("torus radii must be finite and r > 0");
  }
  if (major < minor) {
    throw DomainError("torus requires R >= r (got R=" + std::to_string(major) +
                      ", r=" + std::to_string(minor) + ")");
  }
}

Vec3 embed_torus(const TorusGeometry& geom, const TorusPoint& p) noexcept {
  const double ring = geom.major() + geom.minor() * std::cos(p.theta.value());
  return {ring * std::cos(p.phi.value()), ring * std::sin(p.phi.value()),
          geom.minor() * std::sin(p.theta.value())};
}

double torus_area_density(const TorusGeometry& geom, Angle theta) noexcept {
  return geom.minor() * (geom.major() + geom.minor() * std::cos(theta.value()));
}

namespace {
void check_square_side(double delta) {
  if (!(delta >= 0.0 && delta <= kPi)) {
    throw DomainError("square-angle side must lie in [0, pi], got " + std::to_string(delta));
  }
}
}  // namespace

double square_angle_torus(const TorusGeometry& geom, double delta) {
  check_square_side(delta);
  // Closed form of int_0^delta int_0^delta r (R + r cos t) dphi dt.
  const double r = geom.minor();
  return r * delta * (geom.major() * delta + r * std::sin(delta));
}

double square_angle_sphere(double delta) {
  check_square_side(delta);
  // int_0^delta |cos t| dt is sin(delta) up to pi/2, then 2 - sin(delta).
  if (delta <= kPi / 2.0) return delta * std::sin(delta);
  return delta * (2.0 - std::sin(delta));
}

double angular_distance(Angle a, Angle b) noexcept {
  const double d = std::fabs(a.value() - b.value());
  return std::min(d, kTwoPi - d);
}

Vec3 torus_normal(const TorusPoint& p) noexcept {
  const double ct = std::cos(p.theta.value());
  return {std::cos(p.phi.value()) * ct, std::sin(p.phi.value()) * ct, std::sin(p.theta.value())};
}

double great_circle_distance(const TorusPoint& p1, const TorusPoint& p2) noexcept {
  const double t1 = p1.theta.value();
  const double t2 = p2.theta.value();
  const double c = std::sin(t1) * std::sin(t2) +
                   std::cos(t1) * std::cos(t2) * std::cos(p1.phi.value() - p2.phi.value());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace torreg
