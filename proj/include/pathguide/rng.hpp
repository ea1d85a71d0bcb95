#pragma once

#include <cstdint>
#include <random>

namespace pathguide {

// 32-bit-resolution uniform in [0, 1); hand-rolled so seeded sequences are
// identical across standard library implementations.
inline double uniform01(std::mt19937& rng) {
    return rng() * (1.0 / 4294967296.0);
}

// splitmix-style seed derivation for per-(seed, salt) streams.
inline std::uint32_t mix_seed(std::uint32_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return static_cast<std::uint32_t>(z ^ (z >> 31));
}

}  // namespace pathguide
