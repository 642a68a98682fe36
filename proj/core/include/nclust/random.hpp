#pragma once

#include <cstdint>

namespace nclust {

// 64-bit finalizer (murmur3 variant) with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Derive an independent stream seed from (seed, tag).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  return mix64(mix64(seed + kGoldenGamma) ^ (tag * 0xbf58476d1ce4e5b9ULL));
}

// splitmix64: counter-based generator, bit-stable across platforms.
// Used instead of <random> engines/distributions so that seeded runs
// reproduce exactly everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += kGoldenGamma);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return next_double() < p; }

  // Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift
  // with rejection; unbiased.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    using u128 = unsigned __int128;
    std::uint64_t x = next();
    u128 m = static_cast<u128>(x) * static_cast<u128>(bound);
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t threshold = -bound % bound;
      while (lo < threshold) {
        x = next();
        m = static_cast<u128>(x) * static_cast<u128>(bound);
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

// Canonical key for an unordered node pair.
constexpr std::uint64_t pair_key(std::uint32_t u, std::uint32_t v) noexcept {
  const std::uint64_t lo = u < v ? u : v;
  const std::uint64_t hi = u < v ? v : u;
  return (lo << 32) | hi;
}

// Order-independent uniform draw in [0,1) for an unordered pair under a
// fixed seed: pure function of (seed, {u,v}).
inline double pair_uniform(std::uint64_t seed, std::uint32_t u, std::uint32_t v) noexcept {
  const std::uint64_t h = mix64(mix64(seed + kGoldenGamma) ^ pair_key(u, v));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace nclust
