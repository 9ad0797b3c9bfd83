#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "torreg/angle.hpp"
#include "torreg/random.hpp"

namespace torreg {

struct VonMisesParams {
  Angle mu;
  double kappa = 0.0;  // >= 0; 0 is the uniform law
};

struct WrappedCauchyParams {
  Angle mu;
  double zeta = 0.0;  // in [0, 1); 0 is the uniform law
};

/// Bivariate von Mises sine model:
///   f ∝ exp{k1 cos(phi - mu_phi) + k2 cos(theta - mu_theta) + k3 sin(phi - mu_phi) sin(theta - mu_theta)}.
/// k1, k2 >= 0 (zero is accepted as the limiting case).
struct BvmSineParams {
  Angle mu_phi;
  Angle mu_theta;
  double kappa1 = 1.0;
  double kappa2 = 1.0;
  double kappa3 = 0.0;
};

/// Bivariate von Mises cosine model:
///   f ∝ exp{r1 cos(phi - mu_phi) + r2 cos(theta - mu_theta) + r3 cos(phi - mu_phi - theta + mu_theta)}.
struct BvmCosineParams {
  Angle mu_phi;
  Angle mu_theta;
  double rho1 = 1.0;
  double rho2 = 1.0;
  double rho3 = 0.0;
};

/// Two-component mixture; `weight` is the probability of the sine component.
struct MixtureParams {
  BvmSineParams sine;
  BvmCosineParams cosine;
  double weight = 0.5;
};

void validate(const VonMisesParams& p);
void validate(const WrappedCauchyParams& p);
void validate(const BvmSineParams& p);
void validate(const BvmCosineParams& p);
void validate(const MixtureParams& p);

// ---- circular densities -------------------------------------------------

double vm_density(Angle theta, const VonMisesParams& p);
double wc_density(Angle theta, const WrappedCauchyParams& p);

std::vector<Angle> sample_vm(const VonMisesParams& p, std::size_t n, RngSeed seed);
std::vector<Angle> sample_wc(const WrappedCauchyParams& p, std::size_t n, RngSeed seed);

// Single draws from a caller-owned generator; used by the Gibbs samplers.
double draw_vm(Rng& rng, double mu, double kappa);
double draw_wc(Rng& rng, double mu, double zeta);

// ---- toroidal densities -------------------------------------------------

/// Sine-model density with the normalizing constant computed once.
/// The constant is 4 pi^2 sum_m C(2m, m) (k3^2 / (4 k1 k2))^m I_m(k1) I_m(k2),
/// and the density divides by it.
class BvmSineDensity {
 public:
  explicit BvmSineDensity(const BvmSineParams& p);
  double operator()(const TorusPoint& x) const noexcept;
  // log of the normalizing constant (unscaled).
  double log_normalizer() const noexcept { return log_norm_; }
  // True when the Bessel series did not settle and quadrature was used instead.
  bool used_quadrature() const noexcept { return used_quadrature_; }

 private:
  BvmSineParams p_;
  double log_norm_ = 0.0;
  bool used_quadrature_ = false;
};

/// Cosine-model density; constant 4 pi^2 [I0 I0 I0 + 2 sum_{m>=1} I_m(r1) I_m(r2) I_m(r3)].
class BvmCosineDensity {
 public:
  explicit BvmCosineDensity(const BvmCosineParams& p);
  double operator()(const TorusPoint& x) const noexcept;
  double log_normalizer() const noexcept { return log_norm_; }

 private:
  BvmCosineParams p_;
  double log_norm_ = 0.0;
};

double bvm_sine_density(const TorusPoint& x, const BvmSineParams& p);
double bvm_cosine_density(const TorusPoint& x, const BvmCosineParams& p);
double mixture_density(const TorusPoint& x, const MixtureParams& p);

// ---- toroidal samplers --------------------------------------------------

inline constexpr int kGibbsBurnIn = 1000;
inline constexpr int kGibbsThinning = 5;

/// Gibbs chain with exact von Mises full conditionals. The first call to
/// next() runs the burn-in; each subsequent draw is `kGibbsThinning` sweeps apart.
class BvmSineGibbs {
 public:
  BvmSineGibbs(const BvmSineParams& p, RngSeed seed);
  TorusPoint next();

 private:
  void sweep();
  BvmSineParams p_;
  Rng rng_;
  double phi_;
  double theta_;
  bool burned_in_ = false;
};

class BvmCosineGibbs {
 public:
  BvmCosineGibbs(const BvmCosineParams& p, RngSeed seed);
  TorusPoint next();

 private:
  void sweep();
  BvmCosineParams p_;
  Rng rng_;
  double phi_;
  double theta_;
  bool burned_in_ = false;
};

std::vector<TorusPoint> sample_bvm_sine(const BvmSineParams& p, std::size_t n, RngSeed seed);
std::vector<TorusPoint> sample_bvm_cosine(const BvmCosineParams& p, std::size_t n, RngSeed seed);

/// Component choices come from sub-stream 0 of `seed`; the sine chain runs on
/// sub-stream 1 and the cosine chain on sub-stream 2. With weight 1 the output
/// equals sample_bvm_sine(p.sine, n, derive_seed(seed, 1)).
std::vector<TorusPoint> sample_mixture(const MixtureParams& p, std::size_t n, RngSeed seed);

// ---- specs used by the simulation harness ---------------------------------

struct NoError {};

using CovariateSpec = std::variant<VonMisesParams, WrappedCauchyParams>;
using ErrorSpec = std::variant<NoError, BvmSineParams, BvmCosineParams, MixtureParams>;

// Both covariate components are drawn i.i.d. from the same circular law
// (phi from sub-stream 0, theta from sub-stream 1).
std::vector<TorusPoint> sample_covariates(const CovariateSpec& spec, std::size_t n, RngSeed seed);

// Zero errors for NoError.
std::vector<TorusPoint> sample_errors(const ErrorSpec& spec, std::size_t n, RngSeed seed);

}  // namespace torreg
