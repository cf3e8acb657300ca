#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>

namespace sitesel {

/// SplitMix64 finalizer: a bijective avalanche mix on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for run `run` at cluster count `k`. Depends only on its three inputs, so
/// cells of a sweep can execute in any order on any worker.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t k, std::uint64_t run) {
    std::uint64_t h = mix64(base_seed ^ 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (k * 0xD1B54A32D192ED03ULL + 1));
    h = mix64(h ^ (run * 0xAEF17502108EF2D9ULL + 2));
    return h;
}

/// Counter-based 64-bit generator (SplitMix64). Streams are identical on every platform,
/// which is why the distributions below are hand-rolled instead of using <random>'s.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    constexpr double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n) {
        const auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace sitesel
