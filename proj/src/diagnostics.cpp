#include "torreg/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "torreg/bessel.hpp"
#include "torreg/error.hpp"

namespace torreg {

CircularSummary circular_summary(std::span<const Angle> angles) {
  if (angles.empty()) throw PreconditionError("circular_summary: empty sample");
  double c = 0.0, s = 0.0;
  for (const Angle& a : angles) {
    c += std::cos(a.value());
    s += std::sin(a.value());
  }
  CircularSummary out;
  out.n = angles.size();
  const double r = std::hypot(c, s);
  out.resultant_length = std::min(1.0, r / static_cast<double>(out.n));
  // Sums of unit vectors that cancel leave rounding residue of order n * eps.
  out.mean_defined = r > 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(out.n);
  if (!out.mean_defined) out.resultant_length = 0.0;
  out.mean_direction = out.mean_defined ? Angle(std::atan2(s, c)) : Angle(0.0);
  out.circular_sd = out.resultant_length > 0.0 ? std::sqrt(-2.0 * std::log(out.resultant_length))
                                               : std::numeric_limits<double>::infinity();
  return out;
}

double inverse_bessel_ratio(double rbar, double cap) {
  if (!(rbar > 0.0)) return 0.0;
  if (rbar >= bessel_ratio_a(cap)) return cap;
  double k;
  if (rbar < 0.53) {
    k = 2.0 * rbar + rbar * rbar * rbar + 5.0 * std::pow(rbar, 5) / 6.0;
  } else if (rbar < 0.85) {
    k = -0.4 + 1.39 * rbar + 0.43 / (1.0 - rbar);
  } else {
    k = 1.0 / (rbar * rbar * rbar - 4.0 * rbar * rbar + 3.0 * rbar);
  }
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 200; ++it) {
    k = std::clamp(k, lo, hi);
    const double a = bessel_ratio_a(k);
    const double f = a - rbar;
    if (f == 0.0) return k;
    (f > 0.0 ? hi : lo) = k;
    const double slope = k > 0.0 ? 1.0 - a / k - a * a : 0.5;
    double next = k - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - k) <= 1e-14 * std::max(1.0, k)) return next;
    k = next;
  }
  return k;
}

VonMisesFit vm_mle(std::span<const Angle> angles) {
  if (angles.size() < 2) throw PreconditionError("vm_mle: need at least 2 angles");
  const auto summary = circular_summary(angles);
  VonMisesFit out;
  out.mu = summary.mean_direction;
  if (!summary.mean_defined) {
    out.mean_undefined = true;
    return out;
  }
  out.kappa = inverse_bessel_ratio(summary.resultant_length);
  out.kappa_capped = out.kappa >= kKappaCap;
  return out;
}

double vm_cdf(double theta, Angle mu, double kappa) {
  if (!(kappa >= 0.0)) throw DomainError("vm_cdf: kappa must be >= 0");
  if (!(theta >= 0.0 && theta <= kTwoPi)) theta = wrap_two_pi(theta);
  if (kappa == 0.0) return theta / kTwoPi;
  const double norm = kTwoPi * bessel_i_scaled(0, kappa);
  const double m = mu.value();
  auto density = [&](double t) { return std::exp(kappa * (std::cos(t - m) - 1.0)) / norm; };

  // Split at the mode and the antimode so each piece is monotone.
  std::array<double, 4> cuts{0.0, m, wrap_two_pi(m + kPi), theta};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = std::min(cuts[i + 1], theta);
    if (b <= a) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, a, b, 12, 1e-12);
  }
  return std::clamp(total, 0.0, 1.0);
}

double watson_critical_value_5pct(double kappa_hat) {
  static constexpr std::array<double, 6> kKappa{0.0, 0.5, 1.0, 1.5, 2.0, 4.0};
  static constexpr std::array<double, 6> kCrit{0.061, 0.066, 0.079, 0.092, 0.101, 0.113};
  static constexpr double kCritInf = 0.117;
  if (!(kappa_hat > 0.0)) return kCrit.front();
  if (std::isinf(kappa_hat)) return kCritInf;
  if (kappa_hat >= kKappa.back()) {
    return kCritInf - (kCritInf - kCrit.back()) * (kKappa.back() / kappa_hat);
  }
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(kKappa.begin(), kKappa.end(), kappa_hat) - kKappa.begin());
  const std::size_t lo = hi - 1;
  const double t = (kappa_hat - kKappa[lo]) / (kKappa[hi] - kKappa[lo]);
  return kCrit[lo] + t * (kCrit[hi] - kCrit[lo]);
}

WatsonResult watson_u2(std::span<const Angle> angles) {
  if (angles.size() < 10) throw PreconditionError("watson_u2: need at least 10 angles");
  const auto fit = vm_mle(angles);
  const std::size_t n = angles.size();
  const auto nd = static_cast<double>(n);

  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = vm_cdf(angles[i].value(), fit.mu, fit.kappa);
  std::sort(u.begin(), u.end());
  double sum = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = u[i] - (2.0 * static_cast<double>(i + 1) - 1.0) / (2.0 * nd);
    sum += d * d;
    mean += u[i];
  }
  mean /= nd;

  WatsonResult out;
  out.statistic = sum + 1.0 / (12.0 * nd) - nd * (mean - 0.5) * (mean - 0.5);
  out.kappa_hat = fit.kappa;
  out.mu_hat = fit.mu;
  out.kappa_capped = fit.kappa_capped;
  out.critical_value_5pct = watson_critical_value_5pct(fit.kappa);
  out.reject = out.statistic > out.critical_value_5pct;
  return out;
}

std::vector<std::pair<double, double>> qq_pairs(std::span<const Angle> observed,
                                                std::span<const Angle> predicted) {
  if (observed.size() != predicted.size()) throw PreconditionError("qq_pairs: length mismatch");
  if (observed.empty()) throw PreconditionError("qq_pairs: empty input");
  std::vector<double> a, b;
  for (const Angle& x : observed) a.push_back(x.value());
  for (const Angle& x : predicted) b.push_back(x.value());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::pair<double, double>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = {a[i], b[i]};
  return out;
}

}  // namespace torreg
