#pragma once

// Deterministic randomness for sampling.
//
// Stream contract: sample k under seed s draws from std::mt19937_64 seeded
// with splitmix64(s ^ splitmix64(k + 1)). mt19937_64 is fully specified by
// the standard, so outputs are bit-identical across platforms and samples can
// be generated in any order or in parallel.

#include "chipfire/number.hpp"

#include <cstdint>
#include <random>

namespace chipfire {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(index + 1)));
}

/// Uniform integer in [0, bound) by rejection on whole 64-bit words masked to
/// the bit length of bound - 1; no modulo bias.
inline BigInt uniform_below(std::mt19937_64& rng, const BigInt& bound) {
    if (bound <= 0)
        throw std::invalid_argument("uniform_below: bound must be positive");
    if (bound == 1)
        return 0;
    const BigInt top = bound - 1;
    const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64;
    for (;;) {
        BigInt x = 0;
        for (std::size_t w = 0; w < words; ++w) {
            x <<= 64;
            x += BigInt(static_cast<unsigned long>(rng()));
        }
        const std::size_t excess = words * 64 - bits;
        if (excess > 0)
            mpz_fdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), bits);
        if (x < bound)
            return x;
    }
}

} // namespace chipfire
