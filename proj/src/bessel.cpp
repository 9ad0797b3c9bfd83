#include "torreg/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "torreg/error.hpp"

namespace torreg {

namespace {

constexpr int kSeriesTerms = 300;
constexpr double kSeriesRelTol = 1e-15;
constexpr double kAsymptoticFrom = 250.0;

void check_argument(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_i requires x >= 0, got " + std::to_string(x));
}

// sum_k t_k with t_0 = exp(log_t0) and t_{k+1} = t_k (x/2)^2 / ((k+1)(k+1+order)).
double ascending_series(unsigned order, double x, double log_t0, int max_terms) {
  const double q = 0.25 * x * x;
  double term = std::exp(log_t0);
  double sum = term;
  for (int k = 0; k < max_terms; ++k) {
    term *= q / ((k + 1.0) * (k + 1.0 + order));
    sum += term;
    if (term <= kSeriesRelTol * sum) break;
  }
  return sum;
}

// Hankel expansion of exp(-x) I_nu(x); accurate when x >> nu^2.
double hankel_scaled(unsigned order, double x) {
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * x);
    if (std::fabs(next) >= std::fabs(term)) break;  // asymptotic series started diverging
    term = next;
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_i(unsigned order, double x) {
  check_argument(x);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (x > kAsymptoticFrom) return std::exp(x) * bessel_i_scaled(order, x);
  const double log_t0 = order * std::log(0.5 * x) - std::lgamma(order + 1.0);
  return ascending_series(order, x, log_t0, kSeriesTerms);
}

double bessel_i_scaled(unsigned order, double x) {
  check_argument(x);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  const bool hankel_ok = static_cast<double>(order) * order < 0.05 * x;
  if (x > kAsymptoticFrom && hankel_ok) return hankel_scaled(order, x);
  // Fold exp(-x) into the leading term so large x does not overflow.
  const double log_t0 = order * std::log(0.5 * x) - std::lgamma(order + 1.0) - x;
  const int terms = x > kAsymptoticFrom ? static_cast<int>(4.0 * x) + kSeriesTerms : kSeriesTerms;
  return ascending_series(order, x, log_t0, terms);
}

double bessel_ratio_a(double kappa) {
  check_argument(kappa);
  if (kappa == 0.0) return 0.0;
  return bessel_i_scaled(1, kappa) / bessel_i_scaled(0, kappa);
}

}  // namespace torreg
