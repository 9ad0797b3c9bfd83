#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace torreg {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce any finite real to [0, 2*pi).
inline double wrap_two_pi(double x) noexcept {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2*pi.
  if (y >= kTwoPi) y = 0.0;
  return y;
}

// Reduce any finite real to [-pi, pi).
inline double wrap_signed(double x) noexcept {
  double y = wrap_two_pi(x + kPi) - kPi;
  return y;
}

/// A point on the unit circle, stored as its canonical radian value in [0, 2*pi).
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) noexcept : value_(wrap_two_pi(radians)) {}

  static Angle from_degrees(double degrees) noexcept {
    return Angle(wrap_degrees(degrees) * kPi / 180.0);
  }

  double value() const noexcept { return value_; }
  double degrees() const noexcept { return value_ * 180.0 / kPi; }
  std::complex<double> unit() const noexcept { return std::polar(1.0, value_); }

  Angle operator+(Angle o) const noexcept { return Angle(value_ + o.value_); }
  Angle operator-(Angle o) const noexcept { return Angle(value_ - o.value_); }
  Angle operator-() const noexcept { return Angle(-value_); }

  friend bool operator==(Angle a, Angle b) noexcept { return a.value_ == b.value_; }

 private:
  static double wrap_degrees(double d) noexcept {
    double y = std::fmod(d, 360.0);
    if (y < 0.0) y += 360.0;
    if (y >= 360.0) y = 0.0;
    return y;
  }

  double value_ = 0.0;
};

/// A point on the flat torus: horizontal angle phi, vertical angle theta.
struct TorusPoint {
  Angle phi;
  Angle theta;

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// A complex number of unit modulus. Construction normalizes, so the invariant
/// |z| = 1 holds to rounding.
class UnitComplex {
 public:
  UnitComplex() = default;
  explicit UnitComplex(std::complex<double> z);
  explicit UnitComplex(Angle a) noexcept : z_(a.unit()) {}

  static UnitComplex from_radians(double radians) noexcept { return UnitComplex(Angle(radians)); }

  const std::complex<double>& value() const noexcept { return z_; }
  double re() const noexcept { return z_.real(); }
  double im() const noexcept { return z_.imag(); }
  Angle arg() const noexcept { return Angle(std::arg(z_)); }
  UnitComplex conj() const noexcept { return UnitComplex(std::conj(z_), Unchecked{}); }

  UnitComplex operator*(const UnitComplex& o) const noexcept {
    return UnitComplex(z_ * o.z_, Unchecked{});
  }

 private:
  struct Unchecked {};
  UnitComplex(std::complex<double> z, Unchecked) noexcept : z_(z) {}

  std::complex<double> z_{1.0, 0.0};
};

}  // namespace torreg
