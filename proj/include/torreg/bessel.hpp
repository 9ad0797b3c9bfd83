#pragma once

namespace torreg {

// Modified Bessel function of the first kind I_order(x) for x >= 0, by the
// ascending series sum_k (x/2)^(2k+order) / (k! (k+order)!). Overflows to +inf
// past x ~ 713; use bessel_i_scaled for large arguments.
// Throws DomainError for x < 0.
double bessel_i(unsigned order, double x);

// exp(-x) I_order(x) for x >= 0. Series below x = 250, Hankel expansion above.
double bessel_i_scaled(unsigned order, double x);

// Mean resultant length of a von Mises law, A(kappa) = I_1(kappa) / I_0(kappa).
double bessel_ratio_a(double kappa);

}  // namespace torreg
