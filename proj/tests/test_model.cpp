#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "torreg/error.hpp"
#include "torreg/model.hpp"

using namespace torreg;
using doctest::Approx;

namespace {

const ModelParams kZero{};

ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0, 2 * kPi), m(0, 1);
  const auto coef = [&] {
    const double r = m(rng) < 0.5 ? 0.1 + 0.75 * m(rng) : 1.2 + 3.0 * m(rng);
    return std::polar(r, a(rng));
  };
  return ModelParams::from_complex(std::polar(1.0, a(rng)), coef(), std::polar(1.0, a(rng)), coef());
}

std::vector<TorusPoint> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> a(0, 2 * kPi);
  std::vector<TorusPoint> out(n);
  for (auto& p : out) p = {Angle(a(rng)), Angle(a(rng))};
  return out;
}

Dataset single(TorusPoint covariate, TorusPoint response) {
  Dataset d;
  d.rows.push_back({covariate, response});
  return d;
}

// Normal of the torus at (phi, theta) built from raw trig.
std::array<double, 3> normal(double phi, double theta) {
  return {std::cos(phi) * std::cos(theta), std::sin(phi) * std::cos(theta), std::sin(theta)};
}

}  // namespace

TEST_CASE("residual examples") {
  auto r = residual_pair(kZero, {Angle(0), Angle(0)}, {Angle(kPi / 2), Angle(0)});
  CHECK(r.psi == Approx(kPi / 2));
  CHECK(r.xi == Approx(0.0).scale(1.0));
  CHECK(r.sphere_deflection == Approx(kPi / 2));
  r = residual_pair(kZero, {Angle(0), Angle(0)}, {Angle(0), Angle(kPi / 2)});
  CHECK(r.psi == Approx(0.0).scale(1.0));
  CHECK(r.xi == Approx(kPi / 2));
  CHECK(r.sphere_deflection == Approx(kPi / 2));
  const TorusPoint c{Angle(1.0), Angle(2.0)};
  const auto p = ModelParams::from_complex(1.0, {0.3, 0.2}, 1.0, {2.0, -1.0});
  r = residual_pair(p, c, predict_mean(p, c));
  CHECK(r.psi == 0.0);
  CHECK(r.xi == 0.0);
  CHECK(r.sphere_deflection == Approx(0.0).scale(1.0));
}

TEST_CASE("loss examples") {
  const TorusGeometry g;
  const auto a = single({Angle(0), Angle(0)}, {Angle(kPi / 2), Angle(0)});
  CHECK(loss_torus(kZero, a, g) == Approx(kPi / 2 * (kPi + 1)).epsilon(1e-6));
  CHECK(loss_sphere(kZero, a) == Approx(1.57080).epsilon(1e-5));
  CHECK(loss_total(kZero, a, g) == Approx(kPi / 2 * (kPi + 1) + kPi / 2).epsilon(1e-6));
  CHECK(loss_torus(kZero, a, g) == Approx(kPi / 2 * (kPi + 1)));

  Dataset two = a;
  two.rows.push_back({{Angle(0), Angle(0)}, {Angle(0), Angle(kPi / 2)}});
  CHECK(loss_torus(kZero, two, g) == Approx(kPi / 2 * (kPi + 1)).epsilon(1e-6));

  // Deflection pi: the response normal is antipodal to the mean normal.
  const auto b = single({Angle(0), Angle(0)}, {Angle(kPi), Angle(0)});
  CHECK(loss_sphere(kZero, b) == Approx(2 * kPi));

  CHECK_THROWS_AS(loss_total(kZero, Dataset{}, g), PreconditionError);
  CHECK_THROWS_AS(loss_sphere(kZero, Dataset{}), PreconditionError);
}

TEST_CASE("simulate_responses") {
  std::mt19937_64 rng(1);
  const auto p = random_params(rng);
  const auto cov = random_points(rng, 50);
  const auto d = simulate_responses(p, cov, NoError{}, RngSeed{3});
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.rows[i].response == predict_mean(p, cov[i]));

  const std::vector<TorusPoint> c1{{Angle(1.0), Angle(0.4)}};
  const std::vector<TorusPoint> e1{{Angle(0.2), Angle(-0.3)}};
  const auto s = simulate_responses(kZero, c1, e1);
  CHECK(s.rows[0].response.phi.value() == Approx(0.8));
  CHECK(s.rows[0].response.theta.value() == Approx(oracle::wrap(0.4 - 1.0 - 0.3)));
  CHECK_THROWS_AS(simulate_responses(kZero, c1, std::vector<TorusPoint>{}), PreconditionError);
}

TEST_CASE("loss against a direct oracle") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_params(rng);
    const auto cov = random_points(rng, 37);
    const auto resp = random_points(rng, 37);
    Dataset d;
    for (std::size_t i = 0; i < cov.size(); ++i) d.rows.push_back({cov[i], resp[i]});
    const TorusGeometry g(3.0, 1.5);
    double torus = 0, sphere = 0;
    for (const auto& row : d.rows) {
      const auto m = oracle::mobius(p.beta0(), row.covariate.phi.unit(), row.covariate.theta.unit(), p.beta1());
      const auto n = oracle::mobius(p.gamma0(), row.covariate.theta.unit(), row.covariate.phi.unit(), p.gamma1());
      const double mp = std::arg(m), mt = std::arg(n);
      const double psi = oracle::arc(row.response.phi.value(), mp);
      const double xi = oracle::arc(row.response.theta.value(), mt);
      const auto area_t = [&](double x) { return 1.5 * x * (3.0 * x + 1.5 * std::sin(x)); };
      torus += area_t(psi) + area_t(xi);
      const auto u = normal(row.response.phi.value(), row.response.theta.value()), v = normal(mp, mt);
      const double defl = std::acos(std::clamp(u[0] * v[0] + u[1] * v[1] + u[2] * v[2], -1.0, 1.0));
      sphere += defl <= kPi / 2 ? defl * std::sin(defl) : defl * (2 - std::sin(defl));
    }
    CHECK(loss_torus(p, d, g) == Approx(torus / d.size()).epsilon(1e-9));
    CHECK(loss_sphere(p, d) == Approx(sphere / d.size()).epsilon(1e-7));
  }
}

TEST_CASE("loss is permutation invariant") {
  std::mt19937_64 rng(3);
  const auto p = random_params(rng);
  const auto cov = random_points(rng, 101);
  const auto resp = random_points(rng, 101);
  Dataset d;
  for (std::size_t i = 0; i < cov.size(); ++i) d.rows.push_back({cov[i], resp[i]});
  const double base = loss_total(p, d, TorusGeometry{});
  for (int k = 0; k < 5; ++k) {
    std::shuffle(d.rows.begin(), d.rows.end(), rng);
    CHECK(loss_total(p, d, TorusGeometry{}) == Approx(base).epsilon(1e-13));
  }
}

TEST_CASE("loss under consistent rotations") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> a(0, 2 * kPi);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_params(rng);
    const auto cov = random_points(rng, 40);
    const auto resp = random_points(rng, 40);
    Dataset d;
    for (std::size_t i = 0; i < cov.size(); ++i) d.rows.push_back({cov[i], resp[i]});
    const double a1 = a(rng), a2 = a(rng), v1 = a(rng);
    // The theta rotation of the responses is restricted to 0 or pi: other values
    // move normals non-isometrically on the sphere, so only the torus part is invariant.
    const double v2 = (t % 2) ? kPi : 0.0, v2_any = a(rng);
    const UnitComplex w1 = UnitComplex::from_radians(a1), w2 = UnitComplex::from_radians(a2);
    const auto transform = [&](double rot2) {
      const auto q = rotate_response_params(rotate_covariate_params(p, w1, w2), UnitComplex::from_radians(v1),
                                            UnitComplex::from_radians(rot2));
      Dataset e;
      for (const auto& row : d.rows) {
        e.rows.push_back({{row.covariate.phi + Angle(a1), row.covariate.theta + Angle(a2)},
                          {row.response.phi + Angle(v1), row.response.theta + Angle(rot2)}});
      }
      return std::pair{q, e};
    };
    const TorusGeometry g;
    auto [q, e] = transform(v2);
    CHECK(loss_total(q, e, g) == Approx(loss_total(p, d, g)).epsilon(1e-9));
    std::tie(q, e) = transform(v2_any);
    CHECK(loss_torus(q, e, g) == Approx(loss_torus(p, d, g)).epsilon(1e-9));
  }
}

TEST_CASE("zero-error data: zero loss and a local minimum at the truth") {
  std::mt19937_64 rng(5);
  const TorusGeometry g;
  for (int t = 0; t < 20; ++t) {
    const auto p = random_params(rng);
    const auto cov = random_points(rng, 200);
    const auto d = simulate_responses(p, cov, NoError{}, RngSeed{1});
    const double at_truth = loss_total(p, d, g);
    CHECK(at_truth < 1e-12);
    const auto x = p.to_array();
    for (std::size_t k = 0; k < 6; ++k) {
      for (double h : {-0.05, 0.05}) {
        auto y = x;
        y[k] += h;
        CHECK(loss_total(ModelParams::from_array(y), d, g) > at_truth);
      }
    }
  }
}

TEST_CASE("zero loss iff every response equals the prediction") {
  std::mt19937_64 rng(6);
  const auto p = random_params(rng);
  const auto cov = random_points(rng, 30);
  auto d = simulate_responses(p, cov, NoError{}, RngSeed{0});
  CHECK(loss_total(p, d, TorusGeometry{}) < 1e-12);
  d.rows[17].response.theta = d.rows[17].response.theta + Angle(1e-3);
  CHECK(loss_total(p, d, TorusGeometry{}) > 0.0);
}

TEST_CASE("residual components stay in range and deflection vanishes only for equal normals") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> a(0, 2 * kPi);
  for (int t = 0; t < 5000; ++t) {
    const auto p = random_params(rng);
    const TorusPoint c{Angle(a(rng)), Angle(a(rng))};
    const auto m = predict_mean(p, c);
    // Mix random responses with the cases that share a normal with the mean.
    TorusPoint r{Angle(a(rng)), Angle(a(rng))};
    switch (t % 5) {
      case 1: r = m; break;
      case 2: r = {m.phi + Angle(kPi), Angle(kPi - m.theta.value())}; break;
      case 3: r = {Angle(a(rng)), m.theta}; break;
      default: break;
    }
    const auto res = residual_pair(p, c, r);
    CHECK(res.psi >= 0.0);
    CHECK(res.psi <= kPi);
    CHECK(res.xi >= 0.0);
    CHECK(res.xi <= kPi);
    CHECK(res.sphere_deflection >= 0.0);
    CHECK(res.sphere_deflection <= kPi);
    const auto u = normal(r.phi.value(), r.theta.value()), v = normal(m.phi.value(), m.theta.value());
    const bool same_normal = std::hypot(u[0] - v[0], u[1] - v[1], u[2] - v[2]) < 1e-9;
    CHECK((res.sphere_deflection < 1e-6) == same_normal);
    if (res.psi == 0.0 && res.xi == 0.0) CHECK(res.sphere_deflection < 1e-7);
  }
  // Both at the same pole: zero deflection for any difference in phi.
  const TorusPoint c{Angle(0.3), Angle(1.1)};
  const auto p = ModelParams::from_complex(1.0, 0.0, std::polar(1.0, kPi / 2 - 1.1 + 0.3), 0.0);
  const auto m = predict_mean(p, c);
  CHECK(m.theta.value() == Approx(kPi / 2));
  CHECK(residual_pair(p, c, {m.phi + Angle(2.0), m.theta}).sphere_deflection < 1e-7);
}

TEST_CASE("evaluator reports size and matches the free functions") {
  std::mt19937_64 rng(8);
  const auto p = random_params(rng);
  const auto cov = random_points(rng, 13);
  const auto d = simulate_responses(p, cov, BvmSineParams{Angle(0), Angle(0), 3, 3, 0}, RngSeed{2});
  const LossEvaluator ev(d, TorusGeometry{});
  CHECK(ev.size() == 13);
  CHECK(ev.total(p) == loss_total(p, d, TorusGeometry{}));
  CHECK(ev.total(p.to_array()) == ev.total(p));
}
