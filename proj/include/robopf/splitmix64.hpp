#pragma once
#include <cstdint>

namespace robopf {

// SplitMix64 generator (Vigna). State advances by the golden-gamma constant;
// output is the finalizer of the new state. Streams are reproducible
// bit-for-bit across platforms, which the sampling layer relies on.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform double in [0, 1): next() / 2^64
    double next_unit() {
        return static_cast<double>(next()) * 0x1.0p-64;
    }
};

} // namespace robopf
