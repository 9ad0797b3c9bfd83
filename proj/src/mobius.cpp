#include "torreg/mobius.hpp"

#include "torreg/error.hpp"

namespace torreg {

namespace {

constexpr double kSingularDenominator = 1e-12;

bool in_guard_band(std::complex<double> c) noexcept {
  return std::fabs(std::abs(c) - 1.0) < kModulusGuard;
}

// rot * (a + b coef) / (b + conj(coef) a); shared by both link components.
UnitComplex mobius_component(std::complex<double> a, std::complex<double> b,
                             std::complex<double> rot, std::complex<double> coef,
                             const char* which) {
  const std::complex<double> den = b + std::conj(coef) * a;
  if (std::abs(den) < kSingularDenominator) {
    throw SingularInputError(std::string(which) + ": degenerate Moebius denominator");
  }
  return UnitComplex(rot * (a + b * coef) / den);
}

}  // namespace

ParamValidity params_valid(const ModelParams& params) {
  if (!std::isfinite(params.b1) || !std::isfinite(params.b2) || !std::isfinite(params.b3) ||
      !std::isfinite(params.b4)) {
    return {false, "non-finite coefficient"};
  }
  if (in_guard_band(params.beta1())) {
    return {false, "|beta1| = |b1 + i b2| is within the unit-modulus guard band"};
  }
  if (in_guard_band(params.gamma1())) {
    return {false, "|gamma1| = |b3 + i b4| is within the unit-modulus guard band"};
  }
  return {};
}

UnitComplex link_f1(const UnitComplex& z, const UnitComplex& w, const ModelParams& params) {
  return mobius_component(z.value(), w.value(), params.beta0(), params.beta1(), "link_f1");
}

UnitComplex link_f2(const UnitComplex& z, const UnitComplex& w, const ModelParams& params) {
  return mobius_component(w.value(), z.value(), params.gamma0(), params.gamma1(), "link_f2");
}

TorusPoint predict_mean(const ModelParams& params, const TorusPoint& covariate) {
  const UnitComplex z(covariate.phi);
  const UnitComplex w(covariate.theta);
  return {link_f1(z, w, params).arg(), link_f2(z, w, params).arg()};
}

ModelParams rotate_response_params(const ModelParams& params, const UnitComplex& w1,
                                   const UnitComplex& w2) noexcept {
  ModelParams out = params;
  out.phi0 = params.phi0 + w1.arg();
  out.theta0 = params.theta0 + w2.arg();
  return out;
}

ModelParams rotate_covariate_params(const ModelParams& params, const UnitComplex& w1,
                                    const UnitComplex& w2) noexcept {
  const std::complex<double> a = w1.value();
  const std::complex<double> b = w2.value();
  // For unit a, b: conj(a) b rotates the intercepts, a / b = a conj(b) the slopes.
  return ModelParams::from_complex(std::conj(a) * b * params.beta0(),
                                   a * std::conj(b) * params.beta1(),
                                   std::conj(b) * a * params.gamma0(),
                                   b * std::conj(a) * params.gamma1());
}

}  // namespace torreg
