#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace fagg {

/// Counter-based SplitMix64 stream.
///
/// Word n of the stream for a given seed is mix64(key + (n + 1) * GOLDEN)
/// with key = mix64(seed), i.e. the SplitMix64 sequence started from key and
/// jumped to position n. Draws are pure functions of (seed, position), so a
/// simulation partitioned across threads reproduces the serial run bit for bit.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

    [[nodiscard]] constexpr std::uint64_t word(std::uint64_t position) const noexcept {
        return mix64(key_ + (position + 1) * kGolden);
    }

    /// Uniform on the open interval (0, 1) with 53-bit resolution.
    [[nodiscard]] double uniform(std::uint64_t position) const noexcept {
        return (static_cast<double>(word(position) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Two independent standard normals (Box-Muller) from positions n and n + 1.
    [[nodiscard]] std::pair<double, double> normal_pair(std::uint64_t position) const noexcept {
        constexpr double kTwoPi = 6.28318530717958647692;
        const double radius = std::sqrt(-2.0 * std::log(uniform(position)));
        const double angle = kTwoPi * uniform(position + 1);
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key_;
};

}  // namespace fagg
