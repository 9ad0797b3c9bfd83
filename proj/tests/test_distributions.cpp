#include <doctest.h>

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <random>

#include "oracles.hpp"
#include "torreg/bessel.hpp"
#include "torreg/distributions.hpp"
#include "torreg/error.hpp"

using namespace torreg;
using doctest::Approx;

namespace {

// Ascending series summed to a fixed 50 terms in long double.
double series_i(int n, double x) {
  long double sum = 0.0L, term = std::pow(static_cast<long double>(x) / 2, n);
  for (int k = 1; k <= n; ++k) term /= k;
  for (int k = 0; k < 50; ++k) {
    sum += term;
    term *= (static_cast<long double>(x) * x / 4) / ((k + 1.0L) * (k + 1.0L + n));
  }
  return static_cast<double>(sum);
}

struct Moments {
  double mean_dir;
  double rbar;
};

Moments moments(const std::vector<double>& a) {
  double c = 0.0, s = 0.0;
  for (double v : a) {
    c += std::cos(v);
    s += std::sin(v);
  }
  return {std::atan2(s, c), std::hypot(c, s) / a.size()};
}

std::vector<double> values(const std::vector<Angle>& a) {
  std::vector<double> v;
  for (auto x : a) v.push_back(x.value());
  return v;
}

std::vector<double> component(const std::vector<TorusPoint>& p, bool theta) {
  std::vector<double> v;
  for (const auto& x : p) v.push_back(theta ? x.theta.value() : x.phi.value());
  return v;
}

// Fisher-Lee circular correlation in its O(n) expanded form.
double fisher_lee(const std::vector<double>& a, const std::vector<double>& b) {
  double sasb = 0, cacb = 0, sacb = 0, casb = 0, c2a = 0, s2a = 0, c2b = 0, s2b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sasb += std::sin(a[i]) * std::sin(b[i]);
    cacb += std::cos(a[i]) * std::cos(b[i]);
    sacb += std::sin(a[i]) * std::cos(b[i]);
    casb += std::cos(a[i]) * std::sin(b[i]);
    c2a += std::cos(2 * a[i]);
    s2a += std::sin(2 * a[i]);
    c2b += std::cos(2 * b[i]);
    s2b += std::sin(2 * b[i]);
  }
  const double n2 = static_cast<double>(a.size()) * a.size();
  const double num = 2.0 * (sasb * cacb - sacb * casb);
  const double da = (n2 - c2a * c2a - s2a * s2a) / 2, db = (n2 - c2b * c2b - s2b * s2b) / 2;
  return num / std::sqrt(da * db);
}

// Kuiper p-value against the uniform law, asymptotic series with Stephens' correction.
double kuiper_p(std::vector<double> a) {
  const double n = static_cast<double>(a.size());
  for (double& v : a) v /= 2 * oracle::pi;
  std::sort(a.begin(), a.end());
  double dp = 0, dm = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dp = std::max(dp, (i + 1) / n - a[i]);
    dm = std::max(dm, a[i] - i / n);
  }
  const double lambda = (dp + dm) * (std::sqrt(n) + 0.155 + 0.24 / std::sqrt(n));
  double q = 0;
  for (int j = 1; j < 100; ++j) {
    const double jl = j * j * lambda * lambda;
    q += 2 * (4 * jl - 1) * std::exp(-2 * jl);
  }
  return std::clamp(q, 0.0, 1.0);
}

double sine_exponent(const BvmSineParams& p, double a, double b) {
  const double x = a - p.mu_phi.value(), y = b - p.mu_theta.value();
  return p.kappa1 * std::cos(x) + p.kappa2 * std::cos(y) + p.kappa3 * std::sin(x) * std::sin(y);
}

double cosine_exponent(const BvmCosineParams& p, double a, double b) {
  const double x = a - p.mu_phi.value(), y = b - p.mu_theta.value();
  return p.rho1 * std::cos(x) + p.rho2 * std::cos(y) + p.rho3 * std::cos(x - y);
}

// Marginal mean directions and resultant lengths of exp(g) by quadrature.
std::array<Moments, 2> quadrature_moments(const std::function<double(double, double)>& g) {
  const double two_pi = 2 * oracle::pi;
  const auto e = [&](double a, double b) { return std::exp(g(a, b)); };
  const double z = oracle::integrate2(e, 0, two_pi, 0, two_pi);
  std::array<Moments, 2> out{};
  for (int k = 0; k < 2; ++k) {
    const double c = oracle::integrate2([&](double a, double b) { return std::cos(k ? b : a) * e(a, b); }, 0,
                                        two_pi, 0, two_pi) / z;
    const double s = oracle::integrate2([&](double a, double b) { return std::sin(k ? b : a) * e(a, b); }, 0,
                                        two_pi, 0, two_pi) / z;
    out[k] = {std::atan2(s, c), std::hypot(c, s)};
  }
  return out;
}

double arc(double a, double b) { return oracle::arc(a, b); }

BvmSineParams sine(double k1, double k2, double k3, double m1 = 0, double m2 = 0) {
  return {Angle(m1), Angle(m2), k1, k2, k3};
}
BvmCosineParams cosine(double r1, double r2, double r3, double m1 = 0, double m2 = 0) {
  return {Angle(m1), Angle(m2), r1, r2, r3};
}

}  // namespace

TEST_CASE("bessel functions") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(1, 0.0) == 0.0);
  CHECK(bessel_i(0, 1.0) == Approx(1.2660658778).epsilon(1e-10));
  CHECK_THROWS_AS(bessel_i(0, -1.0), DomainError);
  for (unsigned n : {0u, 1u, 2u, 5u, 10u}) {
    for (double x : {0.01, 0.5, 1.0, 3.0, 7.5, 15.0, 30.0}) {
      CHECK(bessel_i(n, x) == Approx(series_i(n, x)).epsilon(1e-12));
      CHECK(bessel_i(n, x) == Approx(oracle::bessel_i(n, x)).epsilon(1e-10));
    }
    for (double x : {50.0, 120.0, 400.0}) {
      CHECK(bessel_i_scaled(n, x) ==
            Approx(boost::math::cyl_bessel_i(static_cast<double>(n), x) * std::exp(-x)).epsilon(1e-10));
    }
  }
  CHECK(bessel_ratio_a(1.0) == Approx(0.44639).epsilon(1e-5));
  CHECK(bessel_ratio_a(0.0) == 0.0);
  CHECK(bessel_ratio_a(1e4) == Approx(1.0 - 1.0 / 2e4).epsilon(1e-8));
}

TEST_CASE("von Mises and wrapped Cauchy densities") {
  CHECK(vm_density(Angle(1.3), {Angle(0.2), 0.0}) == Approx(1 / (2 * kPi)));
  CHECK(vm_density(Angle(0.5), {Angle(0.5), 1.0}) == Approx(0.341710).epsilon(1e-6));
  CHECK(vm_density(Angle(0.5 + kPi), {Angle(0.5), 1.0}) == Approx(0.046245).epsilon(1e-5));
  CHECK(wc_density(Angle(2.0), {Angle(1.0), 0.0}) == Approx(1 / (2 * kPi)));
  CHECK(wc_density(Angle(1.0), {Angle(1.0), 0.4}) == Approx(1.4 / 0.6 / (2 * kPi)));
  CHECK(wc_density(Angle(kPi + 0.3), {Angle(0.3), 0.2}) == Approx(1 / (3 * kPi)).epsilon(1e-6));

  for (double k : {0.0, 0.5, 1.0, 4.0, 50.0}) {
    const VonMisesParams p{Angle(1.0), k};
    const double mass = oracle::integrate([&](double t) { return vm_density(Angle(t), p); }, 0, 2 * kPi, 64);
    CHECK(mass == Approx(1.0).epsilon(1e-8));
  }
  for (double z : {0.0, 0.2, 0.5, 0.8}) {
    const WrappedCauchyParams p{Angle(kPi), z};
    const double mass = oracle::integrate([&](double t) { return wc_density(Angle(t), p); }, 0, 2 * kPi, 64);
    CHECK(mass == Approx(1.0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(validate(VonMisesParams{Angle(0), -1.0}), DomainError);
  CHECK_THROWS_AS(validate(WrappedCauchyParams{Angle(0), 1.0}), DomainError);
  CHECK_THROWS_AS(validate(MixtureParams{sine(1, 1, 0), cosine(1, 1, 0), 1.5}), DomainError);
}

TEST_CASE("toroidal densities integrate to one") {
  const double two_pi = 2 * kPi;
  std::vector<BvmSineParams> sines = {sine(3, 3, -1), sine(3, 3, 0), sine(3, 3, 1),       sine(4, 4, -1),
                                      sine(4, 4, 1),  sine(4, 5, 0), sine(4, 5, 1),       sine(4, 5, -1),
                                      sine(0.5, 2, 3, 1.0, 4.0),   sine(10, 10, 8, 2.0, 0.5)};
  for (const auto& p : sines) {
    const BvmSineDensity f(p);
    const double mass =
        oracle::integrate2([&](double a, double b) { return f({Angle(a), Angle(b)}); }, 0, two_pi, 0, two_pi);
    CHECK(mass == Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(f.used_quadrature());
  }
  std::vector<BvmCosineParams> cosines = {cosine(4, 4, -1), cosine(4, 4, 0), cosine(4, 4, 1), cosine(5, 6, -1),
                                          cosine(5, 6, 0),  cosine(5, 6, 1), cosine(0.5, 1, 2, 3.0, 1.0),
                                          cosine(8, 6, -5, 0.4, 5.0)};
  for (const auto& p : cosines) {
    const BvmCosineDensity f(p);
    const double mass =
        oracle::integrate2([&](double a, double b) { return f({Angle(a), Angle(b)}); }, 0, two_pi, 0, two_pi);
    CHECK(mass == Approx(1.0).epsilon(1e-6));
  }
  for (double d : {-1.0, 0.0, 1.0}) {
    for (const MixtureParams& p : {MixtureParams{sine(4, 4, d), cosine(4, 4, d), 0.5},
                                   MixtureParams{sine(4, 5, d), cosine(5, 6, d), 0.5},
                                   MixtureParams{sine(4, 5, d), cosine(5, 6, -d), 0.3}}) {
      const double mass = oracle::integrate2([&](double a, double b) { return mixture_density({Angle(a), Angle(b)}, p); },
                                             0, two_pi, 0, two_pi);
      CHECK(mass == Approx(1.0).epsilon(1e-6));
    }
  }
  // The unnormalized sine density against an independent normalizer.
  const auto p = sine(3, 3, 1);
  const double z = oracle::integrate2([&](double a, double b) { return std::exp(sine_exponent(p, a, b)); }, 0,
                                      two_pi, 0, two_pi);
  CHECK(bvm_sine_density({Angle(0.7), Angle(2.0)}, p) ==
        Approx(std::exp(sine_exponent(p, 0.7, 2.0)) / z).epsilon(1e-8));
}

TEST_CASE("uniform limits and factorization") {
  const TorusPoint x{Angle(1.0), Angle(4.0)};
  CHECK(bvm_sine_density(x, sine(0, 0, 0)) == Approx(1 / (4 * kPi * kPi)));
  CHECK(bvm_cosine_density(x, cosine(0, 0, 0)) == Approx(1 / (4 * kPi * kPi)));

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  for (const auto& p : {sine(3, 3, 0), sine(0.7, 5, 0, 1.0, 2.0)}) {
    for (int i = 0; i < 100; ++i) {
      const TorusPoint y{Angle(u(rng)), Angle(u(rng))};
      const double prod = vm_density(y.phi, {p.mu_phi, p.kappa1}) * vm_density(y.theta, {p.mu_theta, p.kappa2});
      CHECK(std::abs(bvm_sine_density(y, p) - prod) <= 1e-10 * std::max(1.0, prod));
    }
  }
  const auto c = cosine(4, 2, 0, 0.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    const TorusPoint y{Angle(u(rng)), Angle(u(rng))};
    const double prod = vm_density(y.phi, {c.mu_phi, c.rho1}) * vm_density(y.theta, {c.mu_theta, c.rho2});
    CHECK(std::abs(bvm_cosine_density(y, c) - prod) <= 1e-10 * std::max(1.0, prod));
  }
}

TEST_CASE("circular samplers") {
  CHECK(sample_vm({Angle(0), 1.0}, 0, RngSeed{1}).empty());
  CHECK(sample_wc({Angle(0), 0.5}, 0, RngSeed{1}).empty());

  auto m = moments(values(sample_vm({Angle(0), 0.0}, 20000, RngSeed{2})));
  CHECK(m.rbar < 0.02);
  m = moments(values(sample_vm({Angle(0), 1.0}, 20000, RngSeed{3})));
  CHECK(std::abs(m.mean_dir) < 0.05);
  CHECK(m.rbar == Approx(oracle::bessel_i(1, 1.0) / oracle::bessel_i(0, 1.0)).epsilon(0.05 / 0.4464));
  for (double k : {0.05, 0.5, 2.0, 8.0, 60.0}) {
    m = moments(values(sample_vm({Angle(2.0), k}, 20000, RngSeed{4})));
    CHECK(std::abs(m.rbar - oracle::bessel_i(1, k) / oracle::bessel_i(0, k)) < 0.02);
    if (k >= 0.5) CHECK(arc(m.mean_dir, 2.0) < 0.05);
  }

  m = moments(values(sample_wc({Angle(kPi), 0.2}, 20000, RngSeed{5})));
  CHECK(arc(m.mean_dir, kPi) < 0.06);
  CHECK(std::abs(m.rbar - 0.2) < 0.03);
  m = moments(values(sample_wc({Angle(1.0), 0.7}, 20000, RngSeed{6})));
  CHECK(std::abs(m.rbar - 0.7) < 0.03);

  int passes = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    if (kuiper_p(values(sample_wc({Angle(0), 0.0}, 5000, RngSeed{100 + s}))) > 0.05) ++passes;
  }
  CHECK(passes >= 17);
  passes = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    if (kuiper_p(values(sample_vm({Angle(0), 0.0}, 5000, RngSeed{200 + s}))) > 0.05) ++passes;
  }
  CHECK(passes >= 17);
  // A concentrated law is rejected.
  CHECK(kuiper_p(values(sample_wc({Angle(0), 0.2}, 5000, RngSeed{7}))) < 0.05);
}

TEST_CASE("Gibbs samplers match quadrature moments") {
  auto independent = sample_bvm_sine(sine(3, 3, 0), 10000, RngSeed{8});
  CHECK(std::abs(fisher_lee(component(independent, false), component(independent, true))) < 0.05);
  independent = sample_bvm_cosine(cosine(4, 4, 0), 10000, RngSeed{9});
  CHECK(std::abs(fisher_lee(component(independent, false), component(independent, true))) < 0.05);

  struct Case {
    std::function<std::vector<TorusPoint>()> draw;
    std::function<double(double, double)> exponent;
    int expected_sign;
  };
  const auto s1 = sine(3, 3, 1), s2 = sine(4, 5, -1, 1.0, 5.0), s3 = sine(1, 2, 1.5, 0.5, 0.5);
  const auto c1 = cosine(4, 4, -1), c2 = cosine(5, 6, 1, 2.0, 3.0), c3 = cosine(1, 2, -1.5, 6.0, 0.2);
  const std::vector<Case> cases = {
      {[&] { return sample_bvm_sine(s1, 20000, RngSeed{10}); }, [&](double a, double b) { return sine_exponent(s1, a, b); }, 1},
      {[&] { return sample_bvm_sine(s2, 20000, RngSeed{11}); }, [&](double a, double b) { return sine_exponent(s2, a, b); }, -1},
      {[&] { return sample_bvm_sine(s3, 20000, RngSeed{12}); }, [&](double a, double b) { return sine_exponent(s3, a, b); }, 1},
      {[&] { return sample_bvm_cosine(c1, 20000, RngSeed{13}); }, [&](double a, double b) { return cosine_exponent(c1, a, b); }, 0},
      {[&] { return sample_bvm_cosine(c2, 20000, RngSeed{14}); }, [&](double a, double b) { return cosine_exponent(c2, a, b); }, 0},
      {[&] { return sample_bvm_cosine(c3, 20000, RngSeed{15}); }, [&](double a, double b) { return cosine_exponent(c3, a, b); }, 0},
  };
  for (const auto& c : cases) {
    const auto draws = c.draw();
    const auto q = quadrature_moments(c.exponent);
    for (int k = 0; k < 2; ++k) {
      const auto m = moments(component(draws, k == 1));
      CHECK(std::abs(m.rbar - q[k].rbar) < 0.05);
      if (q[k].rbar > 0.1) CHECK(arc(m.mean_dir, q[k].mean_dir) < 0.05);
    }
    if (c.expected_sign != 0) {
      CHECK(fisher_lee(component(draws, false), component(draws, true)) * c.expected_sign > 0.0);
    }
  }
}

TEST_CASE("mixture sampler") {
  const MixtureParams p{sine(4, 4, 1), cosine(4, 4, -1), 0.5};
  const auto draws = sample_mixture(p, 20000, RngSeed{16});
  // Count selections by replaying the selector stream.
  Rng selector(derive_seed(RngSeed{16}, 0));
  int sine_count = 0;
  for (int i = 0; i < 20000; ++i) sine_count += selector.uniform() < 0.5;
  CHECK(std::abs(sine_count - 10000) <= 3 * std::sqrt(20000 / 4.0));

  const auto ones = sample_mixture({p.sine, p.cosine, 1.0}, 50, RngSeed{17});
  CHECK(ones == sample_bvm_sine(p.sine, 50, derive_seed(RngSeed{17}, 1)));
  const auto zeros = sample_mixture({p.sine, p.cosine, 0.0}, 50, RngSeed{17});
  CHECK(zeros == sample_bvm_cosine(p.cosine, 50, derive_seed(RngSeed{17}, 2)));

  // Mixture moments against quadrature of the mixture density.
  const double two_pi = 2 * kPi;
  const auto e = [&](double a, double b) { return mixture_density({Angle(a), Angle(b)}, p); };
  const double c = oracle::integrate2([&](double a, double b) { return std::cos(a) * e(a, b); }, 0, two_pi, 0, two_pi);
  const auto m = moments(component(draws, false));
  CHECK(std::abs(m.rbar - std::abs(c)) < 0.05);
}

TEST_CASE("samplers are reproducible") {
  CHECK(sample_vm({Angle(1), 2.0}, 200, RngSeed{99}) == sample_vm({Angle(1), 2.0}, 200, RngSeed{99}));
  CHECK(sample_vm({Angle(1), 2.0}, 200, RngSeed{99}) != sample_vm({Angle(1), 2.0}, 200, RngSeed{98}));
  CHECK(sample_wc({Angle(1), 0.3}, 200, RngSeed{99}) == sample_wc({Angle(1), 0.3}, 200, RngSeed{99}));
  CHECK(sample_bvm_sine(sine(3, 3, 1), 200, RngSeed{5}) == sample_bvm_sine(sine(3, 3, 1), 200, RngSeed{5}));
  CHECK(sample_bvm_cosine(cosine(4, 4, 1), 200, RngSeed{5}) == sample_bvm_cosine(cosine(4, 4, 1), 200, RngSeed{5}));
  const MixtureParams mp{sine(4, 5, 1), cosine(5, 6, -1), 0.5};
  CHECK(sample_mixture(mp, 200, RngSeed{5}) == sample_mixture(mp, 200, RngSeed{5}));
  CHECK(sample_covariates(WrappedCauchyParams{Angle(kPi), 0.2}, 100, RngSeed{3}) ==
        sample_covariates(WrappedCauchyParams{Angle(kPi), 0.2}, 100, RngSeed{3}));
  CHECK(sample_errors(NoError{}, 5, RngSeed{3}) == std::vector<TorusPoint>(5));
}
