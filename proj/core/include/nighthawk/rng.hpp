#pragma once

#include <cstdint>

namespace nh::rng {

/// SplitMix64 step: advances the state and returns the next 64-bit output.
/// Fully specified integer arithmetic, identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stateless mix of two words into one; used to key counter-based streams.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix(mix(a, b), c);
}

/// Uniform double in [0,1) from a 64-bit word (53 mantissa bits).
inline double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based uniform in [0,1) keyed by (key, counter); order-independent.
inline double keyed_unit(std::uint64_t key, std::uint64_t counter) {
    return to_unit(mix(key, counter));
}

/// Approximate standard normal draw from a keyed stream: sum of 12 uniforms
/// minus 6 (Irwin-Hall). Mean 0, variance exactly 1, support [-6,6];
/// avoids libm so identical inputs give bit-identical draws everywhere.
inline double keyed_normal(std::uint64_t key) {
    std::uint64_t state = key;
    double acc = 0.0;
    for (int i = 0; i < 12; ++i) {
        acc += to_unit(splitmix64(state));
    }
    return acc - 6.0;
}

} // namespace nh::rng
