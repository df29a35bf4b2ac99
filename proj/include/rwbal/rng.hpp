#pragma once

#include <cstdint>

namespace rwbal {

// splitmix64 finalizer. All seed derivation goes through this function so
// that streams can be reproduced in other languages from the constants
// alone (see README for the derivation scheme).
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// derive(s, id) gives an independent child seed for a named purpose.
inline uint64_t derive_seed(uint64_t seed, uint64_t id) {
    return mix64(seed ^ mix64(id));
}

// Fixed substream tags (ASCII mnemonics, see README).
inline constexpr uint64_t kStreamRanks = 0x72616e6b73ULL;  // "ranks"
inline constexpr uint64_t kStreamEdges = 0x6564676573ULL;  // "edges"
inline constexpr uint64_t kStreamGraph = 0x6772617068ULL;  // "graph"

// Deterministic stream: iterated splitmix64. Bounded draws use Lemire's
// multiply-shift with rejection, so they are exactly uniform.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, bound), bound >= 1.
    uint64_t below(uint64_t bound) {
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            uint64_t t = (0 - bound) % bound;
            while (lo < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    // Uniform on [0, 1).
    double unit() { return (next_u64() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

}  // namespace rwbal
