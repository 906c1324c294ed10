// Small deterministic RNG helpers shared by the sampling paths. Uniform
// doubles are derived from raw engine output so results do not depend on the
// standard library's distribution implementations.
#pragma once

#include <cstdint>
#include <random>

namespace depsim {

// 53-bit uniform in [0, 1).
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fixed-increment splitmix64 step; used to derive well-spread seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace depsim
