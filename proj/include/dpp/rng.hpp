#pragma once

#include <cstdint>

namespace dpp {

/**
 * Counter-based uniform generator.
 *
 * Every draw is a pure function of (seed, stream, counter):
 *   bits = mix(mix(mix(seed ^ domain) ^ stream) ^ counter)
 * where mix is the SplitMix64 finalizer. The double is the top 53 bits
 * scaled into [0, 1). Streams are sample indices, so a parallel map over
 * indices produces the same draws as a serial loop on every platform.
 */
class CounterRng {
 public:
  /// Domain tags keep independent uses of one seed apart.
  enum class Domain : std::uint64_t {
    DesignSample = 0x44455349474e0000ULL,
    Perturbation = 0x5045525455524200ULL,
    KMeansInit = 0x4b4d45414e530000ULL,
  };

  CounterRng(std::uint64_t seed, Domain domain) noexcept : key_(mix(seed ^ static_cast<std::uint64_t>(domain))) {}

  static constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const noexcept {
    return mix(mix(key_ ^ stream) ^ counter);
  }

  /// Uniform in [0, 1).
  double uniform01(std::uint64_t stream, std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi, std::uint64_t stream, std::uint64_t counter) const noexcept {
    return lo + (hi - lo) * uniform01(stream, counter);
  }

 private:
  std::uint64_t key_;
};

}  // namespace dpp
