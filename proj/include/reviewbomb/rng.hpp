#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace reviewbomb {

/// PCG32 (XSH-RR output over a 64-bit LCG). Deterministic across platforms,
/// unlike the standard distributions whose algorithms are unspecified.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream = 0) {
    inc_ = (stream << 1u) | 1u;
    state_ = 0;
    next();
    state_ += seed;
    next();
  }

  std::uint32_t next() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

  /// Uniform integer in [0, bound) by rejection, no modulo bias.
  std::uint32_t bounded(std::uint32_t bound) {
    std::uint32_t threshold = (-bound) % bound;
    for (;;) {
      std::uint32_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    std::uint64_t hi = next() >> 5;  // 27 bits
    std::uint64_t lo = next() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * (1.0 / 9007199254740992.0);
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

/// Fisher-Yates shuffle driven by Pcg32.
template <typename T>
void shuffle(std::span<T> values, Pcg32& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    auto j = rng.bounded(static_cast<std::uint32_t>(i));
    using std::swap;
    swap(values[i - 1], values[j]);
  }
}

}  // namespace reviewbomb
