#include "levyest/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace levyest {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t seed) {
    std::uint64_t s = seed;
    return std::mt19937_64(splitmix64(s));
}

double uniform01(std::mt19937_64& rng) {
    // 53 random bits, shifted into the open interval (0, 1)
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::uint32_t poisson_count(double mean, std::mt19937_64& rng) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson_count: mean must be >= 0 and finite");
    if (mean == 0.0) return 0;
    if (mean > 300.0)  // keep exp(-mean) well away from underflow
        return poisson_count(0.5 * mean, rng) + poisson_count(mean - 0.5 * mean, rng);
    const double limit = std::exp(-mean);
    std::uint32_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > limit);
    return k - 1;
}

double sample_jump(const JumpDensity& f, std::mt19937_64& rng) {
    validate(f);
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GaussianJumps>) {
                return d.mean + d.sd * standard_normal(rng);
            } else if constexpr (std::is_same_v<T, LaplaceJumps>) {
                const double u = uniform01(rng) - 0.5;
                const double mag = -d.scale * std::log1p(-2.0 * std::abs(u));
                return d.location + (u < 0.0 ? -mag : mag);
            } else if constexpr (std::is_same_v<T, BilateralExpJumps>) {
                const double u = uniform01(rng) - 0.5;
                const double mag = -std::log1p(-2.0 * std::abs(u)) / d.rate;
                return u < 0.0 ? -mag : mag;
            } else {
                return d.halfwidth * (2.0 * uniform01(rng) - 1.0);
            }
        },
        f);
}

IncrementSample simulate_increments(const LevyTriplet& tr, std::size_t n,
                                    std::uint64_t seed) {
    validate(tr);
    if (n == 0)
        throw std::invalid_argument("simulate_increments: n must be positive");

    IncrementSample out;
    out.values.resize(n);
    out.jump_counts.resize(n);
    out.seed = seed;
    out.triplet = tr;

    std::mt19937_64 rng = seeded_engine(seed);
    const double sigma = std::sqrt(tr.sigma2);
    for (std::size_t j = 0; j < n; ++j) {
        double x = tr.gamma + sigma * standard_normal(rng);
        const std::uint32_t count = poisson_count(tr.lambda, rng);
        for (std::uint32_t i = 0; i < count; ++i) x += sample_jump(tr.jumps, rng);
        out.values[j] = x;
        out.jump_counts[j] = count;
    }
    return out;
}

}  // namespace levyest
