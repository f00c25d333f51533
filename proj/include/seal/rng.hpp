#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace seal {

// All randomness in the library flows through mt19937_64 seeded explicitly.
// Helpers below define the exact draw order so results are reproducible
// across platforms (we never rely on std::*_distribution, whose output is
// implementation defined).
using Rng = std::mt19937_64;

// Uniform in [0, 1). 53-bit mantissa path, identical on every platform.
inline double uniform(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). n must be > 0. Modulo bias is < 2^-40 for any
// n below 2^24, far below anything observable here.
inline std::uint64_t uniform_int(Rng& rng, std::uint64_t n) {
    return rng() % n;
}

// Standard normal via Box-Muller. One value per call; the mate is discarded
// to keep the draw count predictable.
inline double normal(Rng& rng) {
    double u1 = uniform(rng);
    double u2 = uniform(rng);
    if (u1 < 1e-300) u1 = 1e-300;
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// Stable sub-seed derivation: mixes a base seed with a stream id so
// independent components (data gen, init, shuffling) never share state.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t x = base ^ (0x9e3779b97f4a7c15ULL + stream * 0xbf58476d1ce4e5b9ULL);
    x ^= x >> 30; x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27; x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

} // namespace seal
