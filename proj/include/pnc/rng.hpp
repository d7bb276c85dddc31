#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pnc {

// SplitMix64 step: state += 0x9E3779B97F4A7C15, then the standard
// (30, 27, 31) xor-shift-multiply finalizer. Used for seeding and hashing.
inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    return splitmix64(x);
}

// Order-sensitive combination of 64-bit words into one seed. Each word is
// folded as h = mix64(h ^ word) starting from h = mix64(first).
inline constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t word) noexcept
{
    return mix64(h ^ word);
}

// xoshiro256** 1.0. Seeded by four consecutive splitmix64 outputs of the seed.
// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class Xoshiro256ss {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256ss(std::uint64_t seed = 0) noexcept { reseed(seed); }

    void reseed(std::uint64_t seed) noexcept
    {
        std::uint64_t sm = seed;
        for (auto& w : s_)
            w = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Index in [0, bound) by the 128-bit multiply-high of one output with bound.
    // No rejection step, so every call consumes exactly one output.
    std::uint64_t below(std::uint64_t bound) noexcept
    {
        return std::uint64_t((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
    }

    std::uint8_t bit() noexcept { return std::uint8_t((*this)() >> 63); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace pnc
