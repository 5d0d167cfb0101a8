// random.hpp - Portable deterministic pseudo-random primitives.
//
// Every random draw in the library flows through SplitMix64 so that a given
// seed yields bit-identical results on any platform and compiler. Two access
// patterns:
//   RandomSource  - sequential stream (stochastic interface sampling)
//   keyed_unit    - stateless draw addressed by (seed, a, b, c); used for
//                   trace jitter so the value at (slot, interface, channel)
//                   never depends on generation order.

#pragma once

#include <cstdint>

namespace streamsim {

// SplitMix64 finalizer (xor-shift/multiply avalanche). Bijective on u64.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Top 53 bits -> uniform double in [0, 1).
inline constexpr double unit_interval(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Stateless draw keyed by position. Distinct tuples give independent values;
// the odd constants keep (a,b) and (b,a) from colliding.
inline constexpr std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t a,
                                         std::uint64_t b, std::uint64_t c) noexcept {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull);
    h = mix64(h ^ (a + 0x9E3779B97F4A7C15ull));
    h = mix64(h ^ (b + 0xC2B2AE3D27D4EB4Full));
    h = mix64(h ^ (c + 0x165667B19E3779F9ull));
    return h;
}

inline constexpr double keyed_unit(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b, std::uint64_t c) noexcept {
    return unit_interval(keyed_u64(seed, a, b, c));
}

// Sequential SplitMix64 stream.
class RandomSource {
public:
    explicit constexpr RandomSource(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // Uniform in [0, 1).
    constexpr double next_double() noexcept { return unit_interval(next_u64()); }

private:
    std::uint64_t state_;
};

}  // namespace streamsim
