#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

// Seeding and sampling primitives. The standard distributions are
// implementation-defined, so every random draw in this library goes through
// the helpers below; outputs are then bit-identical across platforms and
// standard-library versions for a given seed.

namespace mrf {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stable seed mixing: order-sensitive, collision-resistant enough for
// experiment grids. Adding new grid dimensions never perturbs seeds derived
// from the old ones.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2));
    std::uint64_t t = s;
    return splitmix64(t);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::string_view tag) {
    return mix_seed(a, fnv1a64(tag));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in the open interval (0, 1).
inline double uniform_open01(Rng& rng) {
    double u;
    do {
        u = uniform01(rng);
    } while (u == 0.0);
    return u;
}

// Unbiased integer in [lo, hi] via rejection.
inline std::uint64_t uniform_int(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t range = hi - lo + 1;  // hi >= lo; range 0 means full 2^64
    if (range == 0) return rng();
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + x % range;
}

inline int uniform_index(Rng& rng, int count) {
    return static_cast<int>(uniform_int(rng, 0, static_cast<std::uint64_t>(count - 1)));
}

} // namespace mrf
