#pragma once

#include "ramsey/graph.hpp"

#include <cstdint>
#include <random>

namespace ramsey
{
    /// Every randomized component draws from std::mt19937_64 through these helpers only.
    /// The standard distributions are implementation-defined, so they are not used.
    using Rng = std::mt19937_64;

    /// Uniform integer in [0, bound), bound > 0, by rejection sampling on raw engine output.
    [[nodiscard]] inline auto uniform_below(Rng & rng, std::uint64_t bound) -> std::uint64_t
    {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        while (true) {
            auto x = rng();
            if (x < limit)
                return x % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    [[nodiscard]] inline auto uniform_unit(Rng & rng) -> double
    {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }

    /// Uniformly random subset of `from` with `size` members (partial Fisher-Yates).
    [[nodiscard]] auto random_subset(const VertexSet & from, std::size_t size, Rng & rng) -> VertexSet;
}
