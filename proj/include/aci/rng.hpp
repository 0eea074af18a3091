#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace aci {

// Engine used for every stochastic step. Values are drawn through the helpers
// below rather than std distributions so streams are identical across
// standard library implementations.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling, no modulo bias.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

std::uint64_t splitmix64(std::uint64_t x);

// Order-sensitive hash of a seed with any number of stream labels.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> labels);

}  // namespace aci
