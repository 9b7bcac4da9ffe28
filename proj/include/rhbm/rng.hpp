#pragma once

#include <cstdint>

namespace rhbm {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Steele, Lea & Flood 2014). Integer-only, so the
// stream is identical on every platform.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// 53 random bits -> double in [0, 1).
inline constexpr double to_unit_interval(std::uint64_t w) noexcept {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

// Sequential stream generator for latent draws (fitness, angles).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    double uniform01() noexcept { return to_unit_interval(next()); }

private:
    std::uint64_t state_;
};

// Independent stream seed for a tagged sub-purpose of a master seed.
inline constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag) noexcept {
    return mix64(seed + kGolden * (tag + 1));
}

// Counter-based uniform draw keyed on an unordered node pair. The value
// depends only on (seed, min(i,j), max(i,j)), never on traversal order, so
// any schedule over the pair set sees the same Bernoulli noise.
inline constexpr double pair_uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t j) noexcept {
    if (i > j) {
        const std::uint64_t t = i;
        i = j;
        j = t;
    }
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h + kGolden * (i + 1));
    h = mix64(h + kGolden * (j + 1));
    return to_unit_interval(h);
}

} // namespace rhbm
