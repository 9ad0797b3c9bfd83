#include "torreg/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "torreg/bessel.hpp"
#include "torreg/error.hpp"

namespace torreg {

namespace {

constexpr double kFourPiSq = 4.0 * kPi * kPi;
constexpr int kMaxNormalizerTerms = 300;
constexpr double kNormalizerRelTol = 1e-17;

// exp(-x) I_m(x) / x^m, finite at x = 0 where it equals 1 / (2^m m!).
double scaled_bessel_over_power(unsigned m, double x) {
  if (x == 0.0) return std::exp(-std::lgamma(m + 1.0) - m * std::log(2.0));
  if (x > 250.0) return std::exp(std::log(bessel_i_scaled(m, x)) - m * std::log(x));
  const double q = 0.25 * x * x;
  double term = std::exp(-std::lgamma(m + 1.0) - m * std::log(2.0) - x);
  double sum = term;
  for (int k = 0; k < 300; ++k) {
    term *= q / ((k + 1.0) * (k + 1.0 + m));
    sum += term;
    if (term <= 1e-16 * sum) break;
  }
  return sum;
}

// Periodic trapezoid rule over the torus; spectrally accurate for smooth f.
template <class F>
double torus_trapezoid(F&& f, int nodes) {
  const double h = kTwoPi / nodes;
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    double row = 0.0;
    for (int j = 0; j < nodes; ++j) row += f(i * h, j * h);
    sum += row;
  }
  return sum * h * h;
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite and >= 0, got " + std::to_string(v));
  }
}

}  // namespace

void validate(const VonMisesParams& p) { require_nonnegative(p.kappa, "kappa"); }

void validate(const WrappedCauchyParams& p) {
  if (!(p.zeta >= 0.0 && p.zeta < 1.0)) {
    throw DomainError("wrapped Cauchy zeta must lie in [0, 1), got " + std::to_string(p.zeta));
  }
}

void validate(const BvmSineParams& p) {
  require_nonnegative(p.kappa1, "kappa1");
  require_nonnegative(p.kappa2, "kappa2");
  if (!std::isfinite(p.kappa3)) throw DomainError("kappa3 must be finite");
}

void validate(const BvmCosineParams& p) {
  require_nonnegative(p.rho1, "rho1");
  require_nonnegative(p.rho2, "rho2");
  if (!std::isfinite(p.rho3)) throw DomainError("rho3 must be finite");
}

void validate(const MixtureParams& p) {
  validate(p.sine);
  validate(p.cosine);
  if (!(p.weight >= 0.0 && p.weight <= 1.0)) {
    throw DomainError("mixture weight must lie in [0, 1]");
  }
}

// ---- circular --------------------------------------------------------------

double vm_density(Angle theta, const VonMisesParams& p) {
  validate(p);
  const double c = std::cos(theta.value() - p.mu.value());
  return std::exp(p.kappa * (c - 1.0)) / (kTwoPi * bessel_i_scaled(0, p.kappa));
}

double wc_density(Angle theta, const WrappedCauchyParams& p) {
  validate(p);
  const double z = p.zeta;
  return (1.0 - z * z) / (kTwoPi * (1.0 + z * z - 2.0 * z * std::cos(theta.value() - p.mu.value())));
}

double draw_vm(Rng& rng, double mu, double kappa) {
  if (kappa < 1e-12) return wrap_two_pi(kTwoPi * rng.uniform());
  // Best & Fisher (1979) wrapped-Cauchy envelope. rho is written in a form free
  // of cancellation for small kappa.
  const double s = std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double tau = 1.0 + s;
  const double rho = 2.0 * kappa * tau / ((s + 1.0) * (tau + std::sqrt(2.0 * tau)));
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  double f;
  for (;;) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform_open();
    const double z = std::cos(kPi * u1);
    f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    if (c * (2.0 - c) - u2 > 0.0) break;
    if (std::log(c / u2) + 1.0 - c >= 0.0) break;
  }
  const double u3 = rng.uniform();
  const double dev = std::acos(std::clamp(f, -1.0, 1.0));
  return wrap_two_pi(u3 < 0.5 ? mu - dev : mu + dev);
}

double draw_wc(Rng& rng, double mu, double zeta) {
  if (zeta == 0.0) return wrap_two_pi(kTwoPi * rng.uniform());
  const double scale = -std::log(zeta);
  const double u = rng.uniform_open();
  return wrap_two_pi(mu + scale * std::tan(kPi * (u - 0.5)));
}

std::vector<Angle> sample_vm(const VonMisesParams& p, std::size_t n, RngSeed seed) {
  validate(p);
  Rng rng(seed);
  std::vector<Angle> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(draw_vm(rng, p.mu.value(), p.kappa));
  return out;
}

std::vector<Angle> sample_wc(const WrappedCauchyParams& p, std::size_t n, RngSeed seed) {
  validate(p);
  Rng rng(seed);
  std::vector<Angle> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(draw_wc(rng, p.mu.value(), p.zeta));
  return out;
}

// ---- sine model ------------------------------------------------------------

BvmSineDensity::BvmSineDensity(const BvmSineParams& p) : p_(p) {
  validate(p);
  const double k1 = p.kappa1, k2 = p.kappa2, k3 = p.kappa3;
  // Terms of C(2m, m) (k3^2/4)^m [I_m(k1)/k1^m][I_m(k2)/k2^m], scaled by exp(-k1-k2).
  const double log_q = k3 == 0.0 ? 0.0 : 2.0 * std::log(std::fabs(k3)) - std::log(4.0);
  double sum = 0.0;
  bool converged = false;
  for (unsigned m = 0; m < static_cast<unsigned>(kMaxNormalizerTerms); ++m) {
    if (m > 0 && k3 == 0.0) {
      converged = true;
      break;
    }
    const double log_binom = std::lgamma(2.0 * m + 1.0) - 2.0 * std::lgamma(m + 1.0);
    const double term = std::exp(log_binom + m * log_q) * scaled_bessel_over_power(m, k1) *
                        scaled_bessel_over_power(m, k2);
    sum += term;
    if (m > 2 * std::fabs(k3) && term <= kNormalizerRelTol * sum) {
      converged = true;
      break;
    }
  }
  if (converged) {
    log_norm_ = std::log(kFourPiSq * sum) + k1 + k2;
    return;
  }
  used_quadrature_ = true;
  const double shift = k1 + k2 + std::fabs(k3);
  const double integral = torus_trapezoid(
      [&](double a, double b) {
        return std::exp(k1 * std::cos(a) + k2 * std::cos(b) + k3 * std::sin(a) * std::sin(b) - shift);
      },
      1024);
  log_norm_ = std::log(integral) + shift;
}

double BvmSineDensity::operator()(const TorusPoint& x) const noexcept {
  const double a = x.phi.value() - p_.mu_phi.value();
  const double b = x.theta.value() - p_.mu_theta.value();
  const double e =
      p_.kappa1 * std::cos(a) + p_.kappa2 * std::cos(b) + p_.kappa3 * std::sin(a) * std::sin(b);
  return std::exp(e - log_norm_);
}

double bvm_sine_density(const TorusPoint& x, const BvmSineParams& p) {
  return BvmSineDensity(p)(x);
}

// ---- cosine model ----------------------------------------------------------

BvmCosineDensity::BvmCosineDensity(const BvmCosineParams& p) : p_(p) {
  validate(p);
  const double r1 = p.rho1, r2 = p.rho2, r3 = std::fabs(p.rho3);
  const double sign3 = p.rho3 < 0.0 ? -1.0 : 1.0;
  // Scaled by exp(-(r1 + r2 + |r3|)); I_m(-x) = (-1)^m I_m(x).
  double sum = bessel_i_scaled(0, r1) * bessel_i_scaled(0, r2) * bessel_i_scaled(0, r3);
  double sign = 1.0;
  for (unsigned m = 1; m < static_cast<unsigned>(kMaxNormalizerTerms); ++m) {
    sign *= sign3;
    const double term =
        bessel_i_scaled(m, r1) * bessel_i_scaled(m, r2) * bessel_i_scaled(m, r3);
    sum += 2.0 * sign * term;
    if (term <= kNormalizerRelTol * std::fabs(sum)) break;
  }
  log_norm_ = std::log(kFourPiSq * sum) + r1 + r2 + r3;
}

double BvmCosineDensity::operator()(const TorusPoint& x) const noexcept {
  const double a = x.phi.value() - p_.mu_phi.value();
  const double b = x.theta.value() - p_.mu_theta.value();
  const double e = p_.rho1 * std::cos(a) + p_.rho2 * std::cos(b) + p_.rho3 * std::cos(a - b);
  return std::exp(e - log_norm_);
}

double bvm_cosine_density(const TorusPoint& x, const BvmCosineParams& p) {
  return BvmCosineDensity(p)(x);
}

double mixture_density(const TorusPoint& x, const MixtureParams& p) {
  validate(p);
  return p.weight * bvm_sine_density(x, p.sine) + (1.0 - p.weight) * bvm_cosine_density(x, p.cosine);
}

// ---- Gibbs samplers --------------------------------------------------------

BvmSineGibbs::BvmSineGibbs(const BvmSineParams& p, RngSeed seed)
    : p_(p), rng_(seed), phi_(p.mu_phi.value()), theta_(p.mu_theta.value()) {
  validate(p);
}

void BvmSineGibbs::sweep() {
  const double k1 = p_.kappa1, k2 = p_.kappa2, k3 = p_.kappa3;
  const double mp = p_.mu_phi.value(), mt = p_.mu_theta.value();
  // phi | theta: k1 cos(a) + k3 sin(b) sin(a) = A cos(a - offset).
  const double sb = std::sin(theta_ - mt);
  phi_ = draw_vm(rng_, mp + std::atan2(k3 * sb, k1), std::hypot(k1, k3 * sb));
  const double sa = std::sin(phi_ - mp);
  theta_ = draw_vm(rng_, mt + std::atan2(k3 * sa, k2), std::hypot(k2, k3 * sa));
}

TorusPoint BvmSineGibbs::next() {
  if (!burned_in_) {
    for (int i = 0; i < kGibbsBurnIn; ++i) sweep();
    burned_in_ = true;
  }
  for (int i = 0; i < kGibbsThinning; ++i) sweep();
  return {Angle(phi_), Angle(theta_)};
}

BvmCosineGibbs::BvmCosineGibbs(const BvmCosineParams& p, RngSeed seed)
    : p_(p), rng_(seed), phi_(p.mu_phi.value()), theta_(p.mu_theta.value()) {
  validate(p);
}

void BvmCosineGibbs::sweep() {
  const double r1 = p_.rho1, r2 = p_.rho2, r3 = p_.rho3;
  const double mp = p_.mu_phi.value(), mt = p_.mu_theta.value();
  // phi | theta: r1 cos(a) + r3 cos(a - d) = |r1 + r3 e^{id}| cos(a - arg(r1 + r3 e^{id})).
  const double d = theta_ - mt;
  const double pr = r1 + r3 * std::cos(d), pi = r3 * std::sin(d);
  phi_ = draw_vm(rng_, mp + std::atan2(pi, pr), std::hypot(pr, pi));
  const double a = phi_ - mp;
  const double tr = r2 + r3 * std::cos(a), ti = r3 * std::sin(a);
  theta_ = draw_vm(rng_, mt + std::atan2(ti, tr), std::hypot(tr, ti));
}

TorusPoint BvmCosineGibbs::next() {
  if (!burned_in_) {
    for (int i = 0; i < kGibbsBurnIn; ++i) sweep();
    burned_in_ = true;
  }
  for (int i = 0; i < kGibbsThinning; ++i) sweep();
  return {Angle(phi_), Angle(theta_)};
}

std::vector<TorusPoint> sample_bvm_sine(const BvmSineParams& p, std::size_t n, RngSeed seed) {
  BvmSineGibbs chain(p, seed);
  std::vector<TorusPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(chain.next());
  return out;
}

std::vector<TorusPoint> sample_bvm_cosine(const BvmCosineParams& p, std::size_t n, RngSeed seed) {
  BvmCosineGibbs chain(p, seed);
  std::vector<TorusPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(chain.next());
  return out;
}

std::vector<TorusPoint> sample_mixture(const MixtureParams& p, std::size_t n, RngSeed seed) {
  validate(p);
  Rng selector(derive_seed(seed, 0));
  BvmSineGibbs sine(p.sine, derive_seed(seed, 1));
  BvmCosineGibbs cosine(p.cosine, derive_seed(seed, 2));
  std::vector<TorusPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(selector.uniform() < p.weight ? sine.next() : cosine.next());
  }
  return out;
}

// ---- harness specs ---------------------------------------------------------

std::vector<TorusPoint> sample_covariates(const CovariateSpec& spec, std::size_t n, RngSeed seed) {
  const auto draw = [&](RngSeed s) {
    return std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, VonMisesParams>) return sample_vm(p, n, s);
          else return sample_wc(p, n, s);
        },
        spec);
  };
  const auto phi = draw(derive_seed(seed, 0));
  const auto theta = draw(derive_seed(seed, 1));
  std::vector<TorusPoint> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {phi[i], theta[i]};
  return out;
}

std::vector<TorusPoint> sample_errors(const ErrorSpec& spec, std::size_t n, RngSeed seed) {
  return std::visit(
      [&](const auto& p) -> std::vector<TorusPoint> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NoError>) return std::vector<TorusPoint>(n);
        else if constexpr (std::is_same_v<T, BvmSineParams>) return sample_bvm_sine(p, n, seed);
        else if constexpr (std::is_same_v<T, BvmCosineParams>) return sample_bvm_cosine(p, n, seed);
        else return sample_mixture(p, n, seed);
      },
      spec);
}

}  // namespace torreg
