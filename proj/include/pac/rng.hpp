#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace pac {

using Rng = std::mt19937_64;

/// Independent stream keyed by (seed, keys...). Both the engine and
/// std::seed_seq are fully specified by the standard, so streams are
/// identical across platforms.
inline Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {}) {
    std::vector<std::uint32_t> material{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (const std::uint64_t key : keys) {
        material.push_back(static_cast<std::uint32_t>(key));
        material.push_back(static_cast<std::uint32_t>(key >> 32));
    }
    std::seed_seq sequence(material.begin(), material.end());
    return Rng(sequence);
}

/// Uniform on [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace pac
