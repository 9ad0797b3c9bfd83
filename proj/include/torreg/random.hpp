#pragma once

#include <cstdint>
#include <random>

namespace torreg {

struct RngSeed {
  std::uint64_t value = 0;
};

// splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the independent sub-stream `stream` of `seed`:
/// splitmix64(seed XOR splitmix64(stream)). Used for per-replication,
/// per-restart and per-sampler streams so that work can be scheduled in any
/// order without changing results.
constexpr RngSeed derive_seed(RngSeed seed, std::uint64_t stream) noexcept {
  return {splitmix64(seed.value ^ splitmix64(stream))};
}

/// 64-bit Mersenne twister with portable real conversions (the standard
/// distributions are implementation-defined, so they are avoided).
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1).
  double uniform_open() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace torreg
