#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hclab {

using Rng = std::mt19937_64;

/// Independent sub-stream for task `index` under `master_seed`. `tag`
/// separates streams used for different purposes within one task.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t tag = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(tag),
                      static_cast<std::uint32_t>(tag >> 32)};
    return Rng(seq);
}

/// Uniform draw on [0, 1).
inline double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

inline double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }

}  // namespace hclab
