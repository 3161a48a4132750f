#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "levyest/ecf.hpp"
#include "levyest/simulate.hpp"
#include "oracles.hpp"

using namespace levyest;
using cd = std::complex<double>;

namespace {

const double kPi = 3.14159265358979323846;

// hand-rolled grid for synthetic transforms
EcfGrid synthetic_grid(double cutoff, std::size_t size, const CharFnEval& fn) {
    EcfGrid g;
    g.cutoff = cutoff;
    g.t.resize(size);
    g.values.resize(size);
    const std::size_t m = size / 2;
    const double dt = cutoff / static_cast<double>(m);
    for (std::size_t k = 0; k < size; ++k) {
        g.t[k] = dt * (static_cast<double>(k) - static_cast<double>(m));
        if (k == m) g.t[k] = 0.0;
        g.values[k] = fn(g.t[k]);
    }
    return g;
}

}  // namespace

TEST_CASE("input validation") {
    std::vector<double> empty, one{0.5};
    CHECK_THROWS_AS(compute_ecf(empty, 1.0, 9), std::invalid_argument);
    CHECK_THROWS_AS(compute_ecf(one, 0.0, 9), std::invalid_argument);
    CHECK_THROWS_AS(compute_ecf(one, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(compute_ecf(one, 1.0, 1), std::invalid_argument);
}

TEST_CASE("point masses") {
    std::vector<double> zeros{0.0, 0.0, 0.0};
    EcfGrid g = compute_ecf(zeros, 2.0, 33);
    for (const cd& v : g.values) CHECK(std::abs(v - cd(1.0, 0.0)) < 1e-15);
    g = dist_log(std::move(g));
    for (std::size_t k = 0; k < g.t.size(); ++k) {
        CHECK(std::abs(g.log_modulus[k]) < 1e-15);
        CHECK(std::abs(g.unwrapped_arg[k]) < 1e-15);
    }

    std::vector<double> single{0.8};
    EcfGrid s = ecf_log_grid(single, 4.0, 257);
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        CHECK(std::abs(s.values[k] - std::polar(1.0, 0.8 * s.t[k])) < 1e-12);
        CHECK(std::abs(s.unwrapped_arg[k] - 0.8 * s.t[k]) < 1e-12);
        CHECK(std::abs(s.log_modulus[k]) < 1e-13);
    }
}

TEST_CASE("two symmetric points give a cosine") {
    std::vector<double> pm{-1.0, 1.0};
    const EcfGrid g = compute_ecf(pm, kPi, 9);  // t_k = pi k / 4
    CHECK(std::abs(g.values.back() - cd(-1.0, 0.0)) < 1e-14);
    CHECK(std::abs(g.values.front() - cd(-1.0, 0.0)) < 1e-14);
    for (std::size_t k = 0; k < g.t.size(); ++k)
        CHECK(std::abs(g.values[k] - cd(std::cos(g.t[k]), 0.0)) < 1e-14);
    // the transform crosses zero inside the window, so no continuous
    // argument exists; the failure must be loud
    CHECK_THROWS_AS(ecf_log_grid(pm, kPi, 9), unresolved_winding);
}

TEST_CASE("structure on random samples") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> N(0.0, 1.5);
    std::uniform_int_distribution<std::size_t> size_dist(1, 400);
    for (int rep = 0; rep < 12; ++rep) {
        std::vector<double> sample(size_dist(rng));
        for (double& x : sample) x = N(rng);
        const EcfGrid g = compute_ecf(sample, 3.0, 129);
        const std::size_t m = g.center();
        CHECK(g.values[m] == cd(1.0, 0.0));
        CHECK(g.t[m] == 0.0);
        for (std::size_t k = 0; k <= m; ++k) {
            CHECK(g.values[m - k] == std::conj(g.values[m + k]));  // mirrored
            CHECK(std::abs(g.values[m + k]) <= 1.0 + 1e-12);
        }
        // spot-check the recurrence against direct summation
        const CharFnEval direct = make_ecf_evaluator(sample);
        for (std::size_t k : {m / 3, m, m + m / 2, g.t.size() - 1})
            CHECK(std::abs(g.values[k] - direct(g.t[k])) < 1e-12);
    }
}

TEST_CASE("shift covariance") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<double> sample(50), shifted(50);
    const double c = 2.3;
    for (std::size_t j = 0; j < sample.size(); ++j) {
        sample[j] = N(rng);
        shifted[j] = sample[j] + c;
    }
    const EcfGrid a = compute_ecf(sample, 3.0, 129);
    const EcfGrid b = compute_ecf(shifted, 3.0, 129);
    for (std::size_t k = 0; k < a.t.size(); ++k)
        CHECK(std::abs(b.values[k] - a.values[k] * std::polar(1.0, c * a.t[k])) < 1e-12);
}

TEST_CASE("continuous argument tracks a nonlinear winding phase") {
    // |phi| = e^{-t^2/2}, arg = 3t + 0.8 sin t; argument passes +-pi
    const CharFnEval fn = [](double t) {
        return std::polar(std::exp(-0.5 * t * t), 3.0 * t + 0.8 * std::sin(t));
    };
    EcfGrid g = dist_log(synthetic_grid(4.0, 257, fn), fn);
    CHECK_FALSE(g.zero_modulus);
    for (std::size_t k = 0; k < g.t.size(); ++k) {
        const double want = 3.0 * g.t[k] + 0.8 * std::sin(g.t[k]);
        CHECK(std::abs(g.unwrapped_arg[k] - want) < 1e-12);
        CHECK(std::abs(g.log_modulus[k] + 0.5 * g.t[k] * g.t[k]) < 1e-12);
    }
    // against the independent dense tracker
    for (double t : {-4.0, -1.7, 2.9, 4.0})
        CHECK(std::abs(oracle::cumulative_arg(fn, t) -
                       (3.0 * t + 0.8 * std::sin(t))) < 1e-9);
}

TEST_CASE("argument is exactly odd when the transform is Hermitian") {
    const CharFnEval fn = [](double t) {
        return std::polar(std::exp(-0.3 * t * t), 2.0 * t + 0.5 * std::sin(t));
    };
    const EcfGrid g = dist_log(synthetic_grid(5.0, 201, fn), fn);
    const std::size_t m = g.center();
    CHECK(g.unwrapped_arg[m] == 0.0);
    for (std::size_t k = 1; k <= m; ++k)
        CHECK(g.unwrapped_arg[m - k] == -g.unwrapped_arg[m + k]);
}

TEST_CASE("refinement resolves coarse winding") {
    // 5 nodes over [-4, 4]: phase step 2 per node, inside the detectable
    // band (pi/2, pi]; one or two doublings bring it under pi/2
    int evals = 0;
    const CharFnEval probe = [&evals](double t) {
        ++evals;
        return std::polar(1.0, 1.0 * t);
    };
    EcfGrid coarse = synthetic_grid(4.0, 5, probe);
    evals = 0;
    EcfGrid g = dist_log(std::move(coarse), probe);
    CHECK(evals > 0);  // midpoint evaluations actually happened
    for (std::size_t k = 0; k < g.t.size(); ++k)
        CHECK(std::abs(g.unwrapped_arg[k] - g.t[k]) < 1e-12);

    // without an evaluator the same grid must fail loudly
    const CharFnEval fn = [](double t) { return std::polar(1.0, t); };
    CHECK_THROWS_AS(dist_log(synthetic_grid(4.0, 5, fn)), unresolved_winding);
}

TEST_CASE("an exact zero poisons the argument but not the run") {
    const CharFnEval fn = [](double t) {
        return (std::abs(t - 1.0) < 1e-9) ? cd(0.0, 0.0)
                                          : cd(std::exp(-0.5 * t * t), 0.0);
    };
    EcfGrid g = dist_log(synthetic_grid(2.0, 9, fn), fn);  // t = 1 is a node
    CHECK(g.zero_modulus);
    for (double a : g.unwrapped_arg) CHECK(a == 0.0);
    bool floored = false;
    for (double lm : g.log_modulus)
        if (lm == std::log(1e-300)) floored = true;
    CHECK(floored);
}

TEST_CASE("log-modulus clamp") {
    std::vector<double> single{1.3};
    EcfGrid g = ecf_log_grid(single, 2.0, 17);
    g.log_modulus = {-10.0, -2.0, 0.0, 2.0, 10.0};
    g.values.resize(5);
    g.t.resize(5);

    const std::vector<double> z = truncate_log_modulus(g, 0.0);
    for (double v : z) CHECK(v == 0.0);

    const std::vector<double> c3 = truncate_log_modulus(g, 3.0);
    CHECK(c3[0] == -3.0);
    CHECK(c3[1] == -2.0);
    CHECK(c3[2] == 0.0);
    CHECK(c3[3] == 2.0);
    CHECK(c3[4] == 3.0);

    CHECK_THROWS_AS(truncate_log_modulus(g, -1.0), std::invalid_argument);
}

TEST_CASE("small-modulus safeguard") {
    std::vector<double> zeros{0.0, 0.0};
    EcfGrid g = compute_ecf(zeros, 1.0, 9);
    ZeroRiskReport rep = zero_risk_diagnostic(g, 1.0, 1.0, 1.0);
    CHECK_FALSE(rep.flagged);
    CHECK_FALSE(g.zero_risk);
    CHECK(std::abs(rep.threshold - 0.041042499311949397585) < 1e-16);  // e^{-2.5}/2
    CHECK(std::abs(rep.margin - (1.0 - rep.threshold)) < 1e-15);

    // push one modulus below the threshold
    const CharFnEval dip = [](double t) {
        return cd(std::abs(t) > 0.9 ? 0.01 : 1.0, 0.0);
    };
    EcfGrid d = synthetic_grid(1.0, 9, dip);
    rep = zero_risk_diagnostic(d, 1.0, 1.0, 1.0);
    CHECK(rep.flagged);
    CHECK(d.zero_risk);
    CHECK(rep.min_modulus == 0.01);
    CHECK(rep.margin < 0.0);
}

TEST_CASE("reconstruction from the split log form") {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> size_dist(2, 1000);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> sample(size_dist(rng));
        for (double& x : sample) x = N(rng);
        const EcfGrid g = ecf_log_grid(sample, 3.0, 257);
        for (std::size_t k = 0; k < g.t.size(); ++k) {
            const cd rebuilt = std::polar(std::exp(g.log_modulus[k]), g.unwrapped_arg[k]);
            CHECK(std::abs(rebuilt - g.values[k]) < 1e-12);
        }
    }
}

TEST_CASE("large-sample transform error stays in the theoretical envelope") {
    const LevyTriplet tr = make_triplet(0.0, 1.0, 0.0, GaussianJumps{0.0, 1.0});
    const std::size_t n = 100000;
    const double bound = 5.0 * std::sqrt(std::log(static_cast<double>(n)) /
                                         static_cast<double>(n));
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const IncrementSample s = simulate_increments(tr, n, seed);
        const EcfGrid g = compute_ecf(s.values, 3.0, 129);
        double sup = 0.0;
        for (std::size_t k = 0; k < g.t.size(); ++k) {
            const cd exact = std::exp(cd(-0.5 * g.t[k] * g.t[k], 0.0));
            sup = std::max(sup, std::abs(g.values[k] - exact));
        }
        if (sup < bound) ++ok;
    }
    CHECK(ok >= 48);  // 95% of 50
}
