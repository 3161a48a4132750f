#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "levyest/model.hpp"

namespace levyest {

// splitmix64 step; used to whiten seeds before they reach the engine.
std::uint64_t splitmix64(std::uint64_t& state);
// mt19937_64 seeded from splitmix64(seed); the one generator identity used
// everywhere so runs replay byte-for-byte.
std::mt19937_64 seeded_engine(std::uint64_t seed);

// Uniform draw in (0, 1), open on both ends.
double uniform01(std::mt19937_64& rng);
// Standard normal via Box-Muller (cosine branch).
double standard_normal(std::mt19937_64& rng);
// Poisson count by Knuth's product method (split recursively for large mean).
std::uint32_t poisson_count(double mean, std::mt19937_64& rng);

// One draw from the jump density: inverse CDF for Laplace / BilateralExp /
// UniformSym, Box-Muller for Gaussian.
double sample_jump(const JumpDensity& f, std::mt19937_64& rng);

struct IncrementSample {
    std::vector<double> values;
    std::vector<std::uint32_t> jump_counts;
    std::uint64_t seed = 0;
    LevyTriplet triplet;
};

// n unit-spacing increments: gamma + sigma Z_j + sum of N_j jumps with
// N_j ~ Poisson(lambda). Bitwise reproducible for fixed (seed, triplet, n).
IncrementSample simulate_increments(const LevyTriplet& tr, std::size_t n,
                                    std::uint64_t seed);

}  // namespace levyest
