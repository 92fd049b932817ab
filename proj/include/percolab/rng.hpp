#pragma once

#include <cstdint>
#include <limits>

namespace percolab {

/// SplitMix64 finaliser; a bijective 64-bit mixer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of replicate `index` in stream `stream` under `master`. Streams are addressed by
/// value, so a replicate's draws do not depend on which worker runs it.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                                  std::uint64_t index) noexcept {
  return mix64(mix64(mix64(master) ^ stream) + index);
}

/// xoshiro256** seeded through SplitMix64. Models UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      s = z ^ (z >> 31);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Bernoulli(prob) as `uniform() < prob`; exact at prob 0 and 1.
  constexpr bool bernoulli(double prob) noexcept { return uniform() < prob; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4]{};
};

/// Uniform on [0, 1) addressed by (seed, key): the draw for an edge key is the same no matter
/// when or how often it is requested. Used for common-random-number couplings.
[[nodiscard]] constexpr double keyed_uniform(std::uint64_t seed, std::uint64_t key) noexcept {
  return static_cast<double>(mix64(mix64(seed) ^ mix64(key ^ 0x5851f42d4c957f2dULL)) >> 11) * 0x1.0p-53;
}

}  // namespace percolab
