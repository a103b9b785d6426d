// SPDX-License-Identifier: Apache-2.0
#ifndef LAYERGEN_RNG_HPP
#define LAYERGEN_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace layergen {

// 64-bit FNV-1a. std::hash is implementation-defined, this is not.
constexpr uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t splitmix64(uint64_t& state);

// Derives an independent stream seed from a base seed and a stream name.
// Identical (base, name) pairs always give the same seed.
uint64_t substream_seed(uint64_t base_seed, std::string_view name);

// Deterministic random source. mt19937_64 output is fully specified by the
// standard; the uniform/gaussian conversions are hand-rolled so that draws
// are bit-identical across platforms and standard-library versions.
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : engine_(seed) {}

    uint64_t bits() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; pairs are cached.
    double gaussian();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace layergen

#endif
