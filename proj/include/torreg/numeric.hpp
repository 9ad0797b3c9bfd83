#pragma once

#include <cstddef>
#include <span>

namespace torreg {

// Pairwise (cascade) summation. The split points depend only on the length,
// so the result is independent of how the inputs were produced.
inline double pairwise_sum(std::span<const double> x) noexcept {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace torreg
