#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ramsey
{
    [[nodiscard]] constexpr auto fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) -> std::uint64_t
    {
        for (unsigned char c : bytes) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    [[nodiscard]] auto to_hex(std::uint64_t value) -> std::string;

    /// SplitMix64 step; derives independent per-worker seeds from a master seed.
    [[nodiscard]] constexpr auto split_seed(std::uint64_t master, std::uint64_t stream) -> std::uint64_t
    {
        std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
}
