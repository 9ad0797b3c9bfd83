#include <doctest.h>

#include <random>

#include "torreg/kernels/loss_kernel.hpp"
#include "torreg/model.hpp"

using namespace torreg;
using namespace torreg::kernels;

namespace {

ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0, 2 * kPi), m(0, 1);
  const auto coef = [&] {
    const double r = m(rng) < 0.5 ? 0.9 * m(rng) : 1.1 + 5.0 * m(rng);
    return std::polar(r, a(rng));
  };
  return ModelParams::from_complex(std::polar(1.0, a(rng)), coef(), std::polar(1.0, a(rng)), coef());
}

Dataset make_case_data(std::mt19937_64& rng, std::size_t n, const ModelParams* exact = nullptr) {
  std::uniform_real_distribution<double> a(0, 2 * kPi);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const TorusPoint c{Angle(a(rng)), Angle(a(rng))};
    d.rows.push_back({c, exact ? predict_mean(*exact, c) : TorusPoint{Angle(a(rng)), Angle(a(rng))}});
  }
  return d;
}

}  // namespace

TEST_CASE("isa names and selection") {
  CHECK(parse_isa("scalar") == Isa::scalar);
  CHECK(parse_isa("avx2") == Isa::avx2);
  CHECK_FALSE(parse_isa("neon").has_value());
  CHECK(isa_name(Isa::avx2) == "avx2");
  CHECK(isa_available(Isa::scalar));
  CHECK(isa_available(best_available_isa()));
  force_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  force_isa(std::nullopt);
  CHECK(isa_available(active_isa()));
}

TEST_CASE("packing pads to the lane width") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 3u, 4u, 5u, 17u}) {
    const auto d = make_case_data(rng, n);
    const auto p = PackedRows::pack(d.rows);
    CHECK(p.n == n);
    CHECK(p.padded % kLaneWidth == 0);
    CHECK(p.padded >= n);
    CHECK(p.padded < n + kLaneWidth);
    CHECK(p.z_re.size() == p.padded);
  }
}

TEST_CASE("vector kernel matches the scalar reference") {
  if (!isa_available(Isa::avx2)) {
    MESSAGE("AVX2 not available on this machine; equivalence test skipped");
    return;
  }
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (int t = 0; t < 300; ++t) {
    const auto p = random_params(rng);
    const std::size_t n = 1 + t % 37;
    // Every third case uses exact responses to exercise residuals near zero.
    const auto d = make_case_data(rng, n, t % 3 == 0 ? &p : nullptr);
    const TorusGeometry g(t % 2 ? 2.0 : 4.0, t % 2 ? 1.0 : 0.5);
    const auto rows = PackedRows::pack(d.rows);
    std::vector<double> ts(rows.padded), ss(rows.padded), tv(rows.padded), sv(rows.padded);
    loss_terms(Isa::scalar, rows, p, g, ts, ss);
    loss_terms(Isa::avx2, rows, p, g, tv, sv);
    for (std::size_t i = 0; i < n; ++i) {
      const double et = std::abs(ts[i] - tv[i]) / (1.0 + std::abs(ts[i]));
      const double es = std::abs(ss[i] - sv[i]) / (1.0 + std::abs(ss[i]));
      worst = std::max({worst, et, es});
    }
    const double ls = LossEvaluator(d, g, Isa::scalar).total(p);
    const double lv = LossEvaluator(d, g, Isa::avx2).total(p);
    CHECK(std::abs(ls - lv) <= 1e-12 * (1.0 + ls));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("vector kernel covers the whole residual range") {
  if (!isa_available(Isa::avx2)) return;
  // Residuals at 0, pi/2 and pi in each component hit the branch points of
  // the arc reduction and of the sphere area map.
  const ModelParams zero{};
  Dataset d;
  for (double dp : {0.0, kPi / 2, kPi, 3 * kPi / 2, 1e-9, kPi - 1e-9}) {
    for (double dt : {0.0, kPi / 2, kPi, -1e-9}) d.rows.push_back({{Angle(0), Angle(0)}, {Angle(dp), Angle(dt)}});
  }
  const auto rows = PackedRows::pack(d.rows);
  std::vector<double> ts(rows.padded), ss(rows.padded), tv(rows.padded), sv(rows.padded);
  loss_terms(Isa::scalar, rows, zero, TorusGeometry{}, ts, ss);
  loss_terms(Isa::avx2, rows, zero, TorusGeometry{}, tv, sv);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(std::abs(ts[i] - tv[i]) <= 1e-12 * (1.0 + ts[i]));
    CHECK(std::abs(ss[i] - sv[i]) <= 1e-7 * (1.0 + ss[i]));
  }
}
