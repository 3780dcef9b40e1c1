#pragma once

#include <cstdint>

namespace dthp {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function (Steele, Lea & Flood; constants from Vigna).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Key of path `path_index` within a batch seeded by `seed`:
//   mix64(mix64(seed) + (path_index + 1) * gamma)
constexpr std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index) noexcept {
    return mix64(mix64(seed) + (path_index + 1) * kGoldenGamma);
}

/// Counter-based uniform stream: draw k of a stream keyed by `key` is the
/// k-th SplitMix64 output started from `key`, computed without state, so
/// any (path, step) pair is reachable in O(1).
class CounterRng {
  public:
    constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix64(key_ + (counter + 1) * kGoldenGamma);
    }

    // Uniform on [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t key() const noexcept { return key_; }

  private:
    std::uint64_t key_;
};

} // namespace dthp
