#pragma once

#include <array>
#include <complex>
#include <string>

#include "torreg/angle.hpp"

namespace torreg {

/// Half-width of the excluded band around |beta1| = 1 and |gamma1| = 1.
inline constexpr double kModulusGuard = 1e-6;

/// Six-real encoding of the link parameters:
///   beta0 = exp(i phi0), beta1 = b1 + i b2, gamma0 = exp(i theta0), gamma1 = b3 + i b4.
struct ModelParams {
  Angle phi0;
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double b4 = 0.0;
  Angle theta0;

  std::complex<double> beta0() const noexcept { return phi0.unit(); }
  std::complex<double> beta1() const noexcept { return {b1, b2}; }
  std::complex<double> gamma0() const noexcept { return theta0.unit(); }
  std::complex<double> gamma1() const noexcept { return {b3, b4}; }

  // Order (phi0, b1, b2, b3, b4, theta0). Angles are wrapped on the way in.
  std::array<double, 6> to_array() const noexcept {
    return {phi0.value(), b1, b2, b3, b4, theta0.value()};
  }
  static ModelParams from_array(const std::array<double, 6>& x) noexcept {
    return {Angle(x[0]), x[1], x[2], x[3], x[4], Angle(x[5])};
  }
  static ModelParams from_complex(std::complex<double> beta0, std::complex<double> beta1,
                                  std::complex<double> gamma0, std::complex<double> gamma1) noexcept {
    return {Angle(std::arg(beta0)), beta1.real(), beta1.imag(),
            gamma1.real(),          gamma1.imag(), Angle(std::arg(gamma0))};
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline constexpr std::array<const char*, 6> kParamNames = {"phi0", "b1", "b2", "b3", "b4", "theta0"};

struct ParamValidity {
  bool valid = true;
  std::string diagnostic;  // names the offending parameter when invalid
};

ParamValidity params_valid(const ModelParams& params);

// beta0 (z + w beta1) / (w + conj(beta1) z). Throws SingularInputError if the
// denominator modulus drops below 1e-12.
UnitComplex link_f1(const UnitComplex& z, const UnitComplex& w, const ModelParams& params);

// gamma0 (w + z gamma1) / (z + conj(gamma1) w).
UnitComplex link_f2(const UnitComplex& z, const UnitComplex& w, const ModelParams& params);

// Conditional mean direction (arg f1, arg f2) at covariate (arg z, arg w).
TorusPoint predict_mean(const ModelParams& params, const TorusPoint& covariate);

// Parameters reproducing the predictions rotated by (W1, W2) on the response side.
ModelParams rotate_response_params(const ModelParams& params, const UnitComplex& w1,
                                   const UnitComplex& w2) noexcept;

// Parameters that, evaluated at covariates (W1 z, W2 w), reproduce the original
// predictions at (z, w).
ModelParams rotate_covariate_params(const ModelParams& params, const UnitComplex& w1,
                                    const UnitComplex& w2) noexcept;

}  // namespace torreg
