#pragma once

#include "torreg/angle.hpp"

namespace torreg {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const Vec3& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
  double norm() const noexcept { return std::sqrt(dot(*this)); }
};

/// Embedding radii of a ring torus: R horizontal (tube centre), r vertical (tube).
/// R == r (horn torus) is accepted; R < r is rejected.
class TorusGeometry {
 public:
  TorusGeometry() = default;
  TorusGeometry(double major, double minor);

  double major() const noexcept { return major_; }
  double minor() const noexcept { return minor_; }

 private:
  double major_ = 2.0;
  double minor_ = 1.0;
};

Vec3 embed_torus(const TorusGeometry& geom, const TorusPoint& p) noexcept;

// Area density r (R + r cos theta) of the embedded torus in (phi, theta) coordinates.
double torus_area_density(const TorusGeometry& geom, Angle theta) noexcept;

// Area of the coordinate square [0, delta]^2 on the curved torus.
// Throws DomainError unless 0 <= delta <= pi.
double square_angle_torus(const TorusGeometry& geom, double delta);

// Same square measured on the unit sphere, with area element |cos t|.
// Throws DomainError unless 0 <= delta <= pi.
double square_angle_sphere(double delta);

// Shortest arc between two angles, in [0, pi].
double angular_distance(Angle a, Angle b) noexcept;

// Unit outward normal of the torus at p; independent of the radii.
Vec3 torus_normal(const TorusPoint& p) noexcept;

// Great-circle distance between the torus normals at p1 and p2, in [0, pi].
double great_circle_distance(const TorusPoint& p1, const TorusPoint& p2) noexcept;

}  // namespace torreg
