#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "torreg/angle.hpp"

namespace torreg {

struct CircularSummary {
  Angle mean_direction;        // meaningless when !mean_defined
  double resultant_length = 0.0;
  double circular_sd = 0.0;    // sqrt(-2 ln Rbar); +inf when Rbar = 0
  std::size_t n = 0;
  bool mean_defined = true;
};

// Throws PreconditionError for an empty sample.
CircularSummary circular_summary(std::span<const Angle> angles);

inline constexpr double kKappaCap = 1e4;

struct VonMisesFit {
  Angle mu;
  double kappa = 0.0;
  bool kappa_capped = false;   // Rbar too close to 1; kappa clamped to kKappaCap
  bool mean_undefined = false; // Rbar = 0; kappa set to 0
};

// Maximum-likelihood (mu, kappa): kappa solves I1/I0 (kappa) = Rbar.
// Throws PreconditionError for n < 2.
VonMisesFit vm_mle(std::span<const Angle> angles);

// Inverse of A(kappa) = I1(kappa) / I0(kappa) on [0, cap]; returns cap when
// rbar >= A(cap).
double inverse_bessel_ratio(double rbar, double cap = kKappaCap);

// Integral of the von Mises density from 0 to theta. `theta` is in radians;
// values in [0, 2 pi] are used as given (so 2 pi yields the total mass),
// anything else is wrapped first.
double vm_cdf(double theta, Angle mu, double kappa);

struct WatsonResult {
  double statistic = 0.0;
  double critical_value_5pct = 0.0;
  bool reject = false;
  double kappa_hat = 0.0;
  Angle mu_hat;
  bool kappa_capped = false;
};

// 5% critical value of U^2 with both von Mises parameters estimated,
// interpolated in kappa_hat (linearly up to 4, linearly in 1/kappa beyond).
double watson_critical_value_5pct(double kappa_hat);

// Watson's U^2 goodness of fit to a von Mises law with estimated parameters.
// Throws PreconditionError for n < 10.
WatsonResult watson_u2(std::span<const Angle> angles);

// Both samples sorted ascending on [0, 2 pi) and paired by rank.
std::vector<std::pair<double, double>> qq_pairs(std::span<const Angle> observed,
                                                std::span<const Angle> predicted);

}  // namespace torreg
