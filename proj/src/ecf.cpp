#include "levyest/ecf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace levyest {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;
constexpr int kMaxRefinements = 4;

using cd = std::complex<double>;

std::vector<double> make_grid(double cutoff, std::size_t grid_size) {
    std::vector<double> t(grid_size);
    const std::size_t m = grid_size / 2;
    const double dt = cutoff / static_cast<double>(m);
    for (std::size_t k = 0; k < grid_size; ++k)
        t[k] = dt * (static_cast<double>(k) - static_cast<double>(m));
    t[m] = 0.0;
    return t;
}

// Outward accumulation of principal arguments of successive ratios, starting
// at the center node. Fails (returns false) on any step larger than pi/2.
bool try_unwrap(const std::vector<cd>& v, std::vector<double>& arg) {
    const std::size_t m = v.size() / 2;
    arg.assign(v.size(), 0.0);
    arg[m] = std::arg(v[m]);
    for (std::size_t k = m; k + 1 < v.size(); ++k) {
        const double d = std::arg(v[k + 1] * std::conj(v[k]));
        if (std::abs(d) > kHalfPi) return false;
        arg[k + 1] = arg[k] + d;
    }
    for (std::size_t k = m; k > 0; --k) {
        const double d = std::arg(v[k - 1] * std::conj(v[k]));
        if (std::abs(d) > kHalfPi) return false;
        arg[k - 1] = arg[k] + d;
    }
    return true;
}

bool any_zero_modulus(const std::vector<cd>& v) {
    return std::any_of(v.begin(), v.end(),
                       [](const cd& z) { return std::abs(z) < kModulusFloor; });
}

void fill_log_modulus(EcfGrid& grid) {
    grid.log_modulus.resize(grid.values.size());
    for (std::size_t k = 0; k < grid.values.size(); ++k)
        grid.log_modulus[k] = std::log(std::max(std::abs(grid.values[k]), kModulusFloor));
}

}  // namespace

EcfGrid compute_ecf(std::span<const double> sample, double cutoff,
                    std::size_t grid_size) {
    if (sample.empty())
        throw std::invalid_argument("compute_ecf: sample must be nonempty");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff))
        throw std::invalid_argument("compute_ecf: cutoff must be positive");
    if (grid_size < 3 || grid_size % 2 == 0)
        throw std::invalid_argument("compute_ecf: grid_size must be odd and >= 3");

    EcfGrid grid;
    grid.cutoff = cutoff;
    grid.t = make_grid(cutoff, grid_size);

    const std::size_t m = grid_size / 2;
    const double dt = cutoff / static_cast<double>(m);

    // Nonnegative half only: values on the grid are powers of e^{i dt x} per
    // sample point (renormalized periodically against modulus drift); the
    // negative half is the exact conjugate mirror.
    std::vector<cd> acc(m + 1, cd(0.0, 0.0));
    for (const double x : sample) {
        const cd z = std::polar(1.0, dt * x);
        cd w(1.0, 0.0);
        for (std::size_t k = 0; k <= m; ++k) {
            acc[k] += w;
            w *= z;
            if ((k & 127u) == 127u) w /= std::abs(w);
        }
    }
    const double inv_n = 1.0 / static_cast<double>(sample.size());
    grid.values.resize(grid_size);
    grid.values[m] = cd(1.0, 0.0);
    for (std::size_t k = 1; k <= m; ++k) {
        const cd v = acc[k] * inv_n;
        grid.values[m + k] = v;
        grid.values[m - k] = std::conj(v);
    }

    return grid;
}

CharFnEval make_ecf_evaluator(std::span<const double> sample) {
    if (sample.empty())
        throw std::invalid_argument("make_ecf_evaluator: sample must be nonempty");
    std::vector<double> copy(sample.begin(), sample.end());
    return [data = std::move(copy)](double t) {
        cd s(0.0, 0.0);
        for (const double x : data) s += std::polar(1.0, t * x);
        return s / static_cast<double>(data.size());
    };
}

EcfGrid ecf_log_grid(std::span<const double> sample, double cutoff,
                     std::size_t grid_size) {
    return dist_log(compute_ecf(sample, cutoff, grid_size),
                    make_ecf_evaluator(sample));
}

EcfGrid dist_log(EcfGrid grid, const CharFnEval& eval) {
    if (grid.values.size() != grid.t.size() || grid.t.size() < 3 ||
        grid.t.size() % 2 == 0)
        throw std::invalid_argument("dist_log: grid values not filled");
    if (std::abs(grid.values[grid.center()] - cd(1.0, 0.0)) > 1e-9)
        throw std::invalid_argument("dist_log: center value must be 1");

    fill_log_modulus(grid);

    if (any_zero_modulus(grid.values)) {
        // the continuous logarithm cannot be tracked through a zero; record it
        // and assign the argument the arbitrary value 0 everywhere
        grid.zero_modulus = true;
        grid.unwrapped_arg.assign(grid.values.size(), 0.0);
        return grid;
    }

    if (try_unwrap(grid.values, grid.unwrapped_arg)) return grid;

    // refine dyadically: reuse known nodes, evaluate midpoints, unwrap at the
    // fine resolution and read the coarse nodes off at a stride
    std::vector<cd> fine = grid.values;
    for (int r = 1; r <= kMaxRefinements; ++r) {
        if (!eval)
            throw unresolved_winding(
                "dist_log: phase step above pi/2 and no evaluator to refine with");
        const std::size_t fine_size = 2 * fine.size() - 1;
        const std::size_t fm = fine_size / 2;
        const double fdt = grid.cutoff / static_cast<double>(fm);
        std::vector<cd> next(fine_size);
        for (std::size_t k = 0; k < fine_size; ++k) {
            if (k % 2 == 0) {
                next[k] = fine[k / 2];
            } else {
                const double t = fdt * (static_cast<double>(k) - static_cast<double>(fm));
                next[k] = eval(t);
            }
        }
        fine = std::move(next);
        if (any_zero_modulus(fine)) {
            grid.zero_modulus = true;
            grid.unwrapped_arg.assign(grid.values.size(), 0.0);
            return grid;
        }
        std::vector<double> fine_arg;
        if (try_unwrap(fine, fine_arg)) {
            const std::size_t stride = std::size_t{1} << r;
            grid.unwrapped_arg.resize(grid.values.size());
            for (std::size_t k = 0; k < grid.values.size(); ++k)
                grid.unwrapped_arg[k] = fine_arg[k * stride];
            return grid;
        }
    }
    throw unresolved_winding(
        "dist_log: phase steps stayed above pi/2 after 4 refinements");
}

std::vector<double> truncate_log_modulus(const EcfGrid& grid, double M) {
    if (!(M >= 0.0))
        throw std::invalid_argument("truncate_log_modulus: M must be >= 0");
    std::vector<double> out(grid.log_modulus.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = std::clamp(grid.log_modulus[k], -M, M);
    return out;
}

ZeroRiskReport zero_risk_diagnostic(EcfGrid& grid, double Lambda, double Sigma,
                                    double h) {
    if (grid.values.empty())
        throw std::invalid_argument("zero_risk_diagnostic: empty grid");
    if (!(Lambda > 0.0) || !(Sigma > 0.0) || !(h > 0.0))
        throw std::invalid_argument("zero_risk_diagnostic: Lambda, Sigma, h must be positive");

    ZeroRiskReport rep;
    rep.threshold = 0.5 * std::exp(-2.0 * Lambda - Sigma * Sigma / (2.0 * h * h));
    double min_mod = std::abs(grid.values.front());
    for (const auto& v : grid.values) min_mod = std::min(min_mod, std::abs(v));
    rep.min_modulus = min_mod;
    rep.margin = min_mod - rep.threshold;
    rep.flagged = min_mod < rep.threshold;
    grid.zero_risk = rep.flagged;
    return rep;
}

}  // namespace levyest
