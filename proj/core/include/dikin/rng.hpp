#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dikin {

/// xoshiro256++ generator (Blackman & Vigna). Chosen over std::mt19937_64
/// because it supports constant-time jumps, which give non-overlapping
/// streams for multi-chain runs without coordinating seeds.
class Xoshiro256PlusPlus {
 public:
  using result_type = std::uint64_t;

  Xoshiro256PlusPlus() : Xoshiro256PlusPlus(0) {}

  /// Seeds the four state words through SplitMix64 so that any 64-bit seed
  /// (including 0) yields a well-mixed state.
  explicit Xoshiro256PlusPlus(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& word : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      std::uint64_t x = z;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      word = x ^ (x >> 31);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Advances the state by 2^128 draws.
  void jump() {
    static constexpr std::uint64_t kJump[] = {
        0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
        0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
    std::uint64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    for (std::uint64_t mask : kJump) {
      for (int bit = 0; bit < 64; ++bit) {
        if (mask & (1ULL << bit)) {
          s0 ^= state_[0];
          s1 ^= state_[1];
          s2 ^= state_[2];
          s3 ^= state_[3];
        }
        (*this)();
      }
    }
    state_[0] = s0;
    state_[1] = s1;
    state_[2] = s2;
    state_[3] = s3;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

using Rng = Xoshiro256PlusPlus;

/// Stream rule: chain k uses the base seed advanced by k jumps of 2^128
/// draws, so concurrent chains never overlap and chain 0 reproduces a
/// single-chain run with the same seed.
inline Rng rng_for_chain(std::uint64_t seed, std::uint64_t chain_index) {
  Rng rng(seed);
  for (std::uint64_t k = 0; k < chain_index; ++k) rng.jump();
  return rng;
}

/// Uniform double in [0, 1) with 53-bit resolution.
inline double uniform_double(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe to pass to log().
inline double uniform_open(Rng& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// One standard normal draw via Box-Muller. The sine partner is discarded
/// to keep the draw count per call fixed, which matters for stream replay.
inline double standard_normal(Rng& rng) {
  const double u1 = uniform_open(rng);
  const double u2 = uniform_double(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

/// Poisson with unit rate by inversion: P(N = i) = 1/(e * i!).
inline int poisson_unit(Rng& rng) {
  static const double kThreshold = std::exp(-1.0);
  int count = -1;
  double product = 1.0;
  do {
    product *= uniform_open(rng);
    ++count;
  } while (product > kThreshold);
  return count;
}

}  // namespace dikin
