#pragma once

#include <cstdint>

#include "infoveil/stats.hpp"

namespace infoveil {

/// Counter-based deterministic generator. Output i of stream s under seed k
/// is the SplitMix64 finalizer applied to
///     k ^ (s * 0xA24BAED4963EE407)  +  (i + 1) * 0x9E3779B97F4A7C15
/// so any draw is addressable by (seed, stream, counter) without sequencing
/// state. Gaussian draws go through the inverse normal CDF, which keeps
/// output reproducible bit for bit for a given seed.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(seed ^ (stream * 0xA24BAED4963EE407ULL)) {}

    std::uint64_t next_u64() {
        std::uint64_t x = base_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

    /// Uniform draw strictly inside (0, 1).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_gaussian(double mean = 0.0, double sd = 1.0) {
        return mean + sd * normal_quantile(next_uniform());
    }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

} // namespace infoveil
