#include <atomic>
#include <cstdlib>

#include "torreg/kernels/loss_kernel.hpp"

namespace torreg::kernels {

namespace {

// -1: no override; otherwise the forced Isa value.
std::atomic<int> g_forced{-1};

bool cpu_has_avx2_fma() noexcept {
#if defined(TORREG_HAVE_AVX2_KERNEL) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  return std::nullopt;
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: {
      static const bool ok = cpu_has_avx2_fma();
      return ok;
    }
  }
  return false;
}

Isa best_available_isa() noexcept {
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() noexcept {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  static const Isa from_env = [] {
    if (const char* env = std::getenv("TORREG_KERNEL")) {
      if (auto isa = parse_isa(env); isa && isa_available(*isa)) return *isa;
    }
    return best_available_isa();
  }();
  return from_env;
}

void force_isa(std::optional<Isa> isa) {
  g_forced.store(isa && isa_available(*isa) ? static_cast<int>(*isa) : -1,
                 std::memory_order_relaxed);
}

void loss_terms(Isa isa, const PackedRows& rows, const ModelParams& params,
                const TorusGeometry& geom, std::span<double> torus, std::span<double> sphere) {
#if defined(TORREG_HAVE_AVX2_KERNEL)
  if (isa == Isa::avx2 && isa_available(Isa::avx2)) {
    loss_terms_avx2(rows, params, geom, torus, sphere);
    return;
  }
#endif
  (void)isa;
  loss_terms_scalar(rows, params, geom, torus, sphere);
}

}  // namespace torreg::kernels
