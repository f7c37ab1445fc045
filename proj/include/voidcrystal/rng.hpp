#ifndef VOIDCRYSTAL_RNG_HPP
#define VOIDCRYSTAL_RNG_HPP

#include <bit>
#include <cstdint>
#include <random>

namespace voidcrystal {

// Draw helpers on top of mt19937_64. Stateless given the engine, so a
// checkpointed engine reproduces the exact draw sequence on restore
// (std::uniform_int_distribution makes no such promise).

inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) via power-of-two mask rejection.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
  const std::uint64_t mask = std::bit_ceil(n) - 1;
  std::uint64_t v;
  do {
    v = g() & mask;
  } while (v >= n);
  return v;
}

}

#endif
