#pragma once

#include <cstdint>

namespace genericase {

namespace detail {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function (Steele, Lea, Flood).
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

}  // namespace detail

/// Derives an independent generator seed from (masterSeed, streamId, index).
/// The derivation is a pure function, so replicas can be drawn in any order
/// (or in parallel) with bit-identical results.
inline constexpr std::uint64_t derive_seed(std::uint64_t master_seed,
                                           std::uint64_t stream_id,
                                           std::uint64_t index) {
  std::uint64_t h = detail::mix64(master_seed + detail::kGoldenGamma);
  h = detail::mix64(h ^ (stream_id + detail::kGoldenGamma));
  h = detail::mix64(h ^ (index + detail::kGoldenGamma));
  return h;
}

/// Small deterministic PRNG (SplitMix64 sequence). One instance per replica;
/// instances derived from distinct (seed, stream, index) keys are treated as
/// independent streams.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() {
    state_ += detail::kGoldenGamma;
    return detail::mix64(state_);
  }

  /// Uniform integer in [0, bound), unbiased via rejection.
  std::uint64_t below(std::uint64_t bound) {
    // 2^64 mod bound; rejecting draws under it makes x % bound exact.
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t x = next_u64();
    while (x < threshold) x = next_u64();
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace genericase
