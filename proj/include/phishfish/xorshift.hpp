#pragma once

#include <cstdint>

namespace phishfish {

// xorshift64* with the 12/25/27 shift triple. The sequence is part of the
// replay format: changing it invalidates every stored seed.
class xorshift64star {
public:
    static constexpr std::uint64_t zero_seed_replacement = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t multiplier = 2685821657736338717ULL;

    constexpr explicit xorshift64star(std::uint64_t seed) noexcept
        : state_(seed == 0 ? zero_seed_replacement : seed)
    {
    }

    constexpr std::uint64_t next() noexcept
    {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * multiplier;
    }

    // Uniform-ish index in [0, bound); plain modulo, pinned for reproducibility.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

private:
    std::uint64_t state_;
};

} // namespace phishfish
