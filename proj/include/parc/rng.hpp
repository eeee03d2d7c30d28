#pragma once
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace parc {

/// Seedable 64-bit PRNG (splitmix64). Counter-based, period 2^64, and simple
/// enough to re-implement from its published constants in any language.
/// Identical seed + identical call sequence gives identical output streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller (cosine branch). Consumes exactly two
    /// uniforms per call; rejection-free so stream positions stay predictable.
    double gaussian() {
        double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Independent stream seeded from this one.
    Rng split() { return Rng(next_u64()); }

    std::uint64_t state() const { return state_; }

    /// 8-byte little-endian state serialization.
    std::array<std::uint8_t, 8> to_bytes() const {
        std::array<std::uint8_t, 8> b{};
        for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(state_ >> (8 * i));
        return b;
    }

    static Rng from_bytes(const std::array<std::uint8_t, 8>& b) {
        std::uint64_t s = 0;
        for (int i = 0; i < 8; ++i) s |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return Rng(s);
    }

private:
    std::uint64_t state_;
};

} // namespace parc
