#pragma once

// Per-row loss kernels. Each kernel writes, for every row i,
//   torus[i]  = A_T(psi_i) + A_T(xi_i)
//   sphere[i] = A_S(deflection_i)
// and the caller reduces with pairwise_sum. The scalar kernel is the reference
// (it composes the public geometry and Moebius operations row by row); the SIMD
// kernels use an equivalent trig-free complex formulation and are checked
// against it in tests/test_kernels.cpp.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "torreg/angle.hpp"
#include "torreg/geometry.hpp"
#include "torreg/mobius.hpp"

namespace torreg {
struct DataRow;
}

namespace torreg::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view name) noexcept;

// Widest ISA both compiled in and supported by the running CPU.
Isa best_available_isa() noexcept;
bool isa_available(Isa isa) noexcept;

// best_available_isa(), unless overridden by force_isa() or by the
// TORREG_KERNEL environment variable ("scalar" or "avx2").
Isa active_isa() noexcept;
void force_isa(std::optional<Isa> isa);

inline constexpr std::size_t kLaneWidth = 4;

/// Structure-of-arrays copy of a dataset. Covariates z = e^{i phi}, w = e^{i theta}
/// and responses u, v as unit complex numbers, padded to a multiple of
/// kLaneWidth with the point (1, 1) so SIMD kernels never need a tail loop.
struct PackedRows {
  std::size_t n = 0;
  std::size_t padded = 0;
  std::vector<TorusPoint> covariates;
  std::vector<TorusPoint> responses;
  std::vector<double> z_re, z_im, w_re, w_im, u_re, u_im, v_re, v_im;

  static PackedRows pack(std::span<const DataRow> rows);
};

struct LossParts {
  double torus = 0.0;
  double sphere = 0.0;
  double total() const noexcept { return torus + sphere; }
};

// Output spans must hold at least rows.padded entries.
void loss_terms_scalar(const PackedRows& rows, const ModelParams& params, const TorusGeometry& geom,
                       std::span<double> torus, std::span<double> sphere);

#if defined(TORREG_HAVE_AVX2_KERNEL)
void loss_terms_avx2(const PackedRows& rows, const ModelParams& params, const TorusGeometry& geom,
                     std::span<double> torus, std::span<double> sphere);
#endif

void loss_terms(Isa isa, const PackedRows& rows, const ModelParams& params,
                const TorusGeometry& geom, std::span<double> torus, std::span<double> sphere);

}  // namespace torreg::kernels
