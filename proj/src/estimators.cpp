#include "levyest/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levyest/quadrature.hpp"

namespace levyest {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
using cd = std::complex<double>;

void check_grid_config(const EcfGrid& grid, const EstimatorConfig& cfg) {
    if (!(cfg.h > 0.0) || !std::isfinite(cfg.h))
        throw std::invalid_argument("estimator config: h must be positive");
    if (!(cfg.M_n >= 0.0))
        throw std::invalid_argument("estimator config: M_n must be >= 0");
    if (grid.t.size() != cfg.grid_size)
        throw std::invalid_argument("estimator config: grid size mismatch");
    if (std::abs(grid.cutoff * cfg.h - 1.0) > 1e-9)
        throw std::invalid_argument("estimator config: grid cutoff must equal 1/h");
    if (grid.log_modulus.size() != grid.t.size() ||
        grid.unwrapped_arg.size() != grid.t.size())
        throw std::invalid_argument("estimator: grid log fields not filled");
}

struct WeightedIntegral {
    double value = 0.0;
    bool clamped = false;
    double residual = 0.0;  // half-grid Simpson deviation, mixed-relative
};

// Simpson integral over the grid of clamp(source, +-M) * kernel.scaled(h, t),
// with a half-resolution re-evaluation as a convergence probe.
WeightedIntegral weighted_integral(const std::vector<double>& t,
                                   const std::vector<double>& source,
                                   const SpectralKernel& kernel, double h,
                                   double M) {
    const std::size_t n = t.size();
    std::vector<double> f(n);
    bool clamped = false;
    for (std::size_t k = 0; k < n; ++k) {
        const double raw = source[k];
        const double val = std::clamp(raw, -M, M);
        clamped = clamped || (val != raw);
        f[k] = val * kernel.scaled(h, t[k]);
    }
    const double dt = t[1] - t[0];
    WeightedIntegral out;
    out.value = simpson(f, dt);
    out.clamped = clamped;
    if ((n - 1) % 4 == 0) {
        const double half = simpson_half(f, dt);
        out.residual = std::abs(out.value - half) / (1.0 + std::abs(out.value));
    }
    return out;
}

}  // namespace

std::vector<double> linspace(const XGrid& g) {
    if (g.count < 2 || !(g.max > g.min))
        throw std::invalid_argument("x grid: need max > min and count >= 2");
    std::vector<double> x(g.count);
    const double step = (g.max - g.min) / static_cast<double>(g.count - 1);
    for (std::size_t j = 0; j < g.count; ++j)
        x[j] = g.min + step * static_cast<double>(j);
    x.back() = g.max;
    return x;
}

EstimatorConfig default_config(std::size_t n, const ClassParams& params) {
    validate(params);
    if (n < 16)
        throw std::invalid_argument("default_config: n must be >= 16");

    EstimatorConfig cfg;
    cfg.n = n;
    cfg.eta = 0.5 / (params.Sigma * params.Sigma);
    const double log_n = std::log(static_cast<double>(n));
    cfg.h = 1.0 / std::sqrt(cfg.eta * log_n);
    cfg.m_n = std::log(log_n);
    cfg.M_n = cfg.m_n / (cfg.h * cfg.h);
    cfg.beta = params.beta;
    cfg.grid_size = 2049;
    cfg.x_grid = XGrid{};
    cfg.v = build_kernel_v(params.beta);
    cfg.u = build_kernel_u(params.beta);
    cfg.w = build_kernel_w(params.beta);
    return cfg;
}

double estimate_sigma2(const EcfGrid& grid, const EstimatorConfig& cfg,
                       bool* truncation_active) {
    check_grid_config(grid, cfg);
    const auto r = weighted_integral(grid.t, grid.log_modulus, cfg.v, cfg.h, cfg.M_n);
    if (truncation_active) *truncation_active = r.clamped;
    return r.value;
}

double estimate_lambda(const EcfGrid& grid, const EstimatorConfig& cfg,
                       bool* truncation_active) {
    check_grid_config(grid, cfg);
    const auto r = weighted_integral(grid.t, grid.log_modulus, cfg.u, cfg.h, cfg.M_n);
    if (truncation_active) *truncation_active = r.clamped;
    return r.value;
}

double estimate_gamma(const EcfGrid& grid, const EstimatorConfig& cfg,
                      bool* truncation_active) {
    check_grid_config(grid, cfg);
    const auto r = weighted_integral(grid.t, grid.unwrapped_arg, cfg.w, cfg.h, cfg.M_n);
    if (truncation_active) *truncation_active = r.clamped;
    return r.value;
}

TripletEstimate estimate_triplet(const EcfGrid& grid, const EstimatorConfig& cfg) {
    check_grid_config(grid, cfg);
    TripletEstimate est;
    const auto rs = weighted_integral(grid.t, grid.log_modulus, cfg.v, cfg.h, cfg.M_n);
    const auto rl = weighted_integral(grid.t, grid.log_modulus, cfg.u, cfg.h, cfg.M_n);
    const auto rg = weighted_integral(grid.t, grid.unwrapped_arg, cfg.w, cfg.h, cfg.M_n);
    est.sigma2_hat = rs.value;
    est.lambda_hat = rl.value;
    est.gamma_hat = rg.value;
    est.flags.zero_risk = grid.zero_risk;
    est.flags.zero_modulus = grid.zero_modulus;
    est.flags.truncation_active_sigma = rs.clamped;
    est.flags.truncation_active_lambda = rl.clamped;
    est.flags.truncation_active_gamma = rg.clamped;
    est.quadrature_residual = std::max({rs.residual, rl.residual, rg.residual});
    return est;
}

std::vector<cd> rho_spectral_values(const TripletEstimate& est, const EcfGrid& grid,
                                    const EstimatorConfig& cfg) {
    check_grid_config(grid, cfg);
    std::vector<cd> g(grid.t.size());
    for (std::size_t k = 0; k < grid.t.size(); ++k) {
        const double t = grid.t[k];
        const double lg = std::clamp(grid.log_modulus[k], -cfg.M_n, cfg.M_n);
        const double ar = std::clamp(grid.unwrapped_arg[k], -cfg.M_n, cfg.M_n);
        g[k] = cd(est.lambda_hat + 0.5 * est.sigma2_hat * t * t + lg,
                  -est.gamma_hat * t + ar);
    }
    return g;
}

namespace {

// (1/2pi) Simpson of g_k e^{-i t_k x} over the grid, stride 1 or 2, using an
// incremental phase (renormalized against drift).
cd spectral_sum(const std::vector<double>& t, const std::vector<cd>& g, double x,
                std::size_t stride) {
    const std::size_t n = t.size();
    const std::size_t last = n - 1;
    const double dt = (t[1] - t[0]) * static_cast<double>(stride);
    cd ph = std::polar(1.0, -t[0] * x);
    const cd step = std::polar(1.0, -dt * x);
    cd acc(0.0, 0.0);
    std::size_t parity = 0;
    for (std::size_t k = 0; k < n; k += stride, ++parity) {
        const double w =
            (k == 0 || k == last) ? 1.0 : (parity % 2 == 1 ? 4.0 : 2.0);
        acc += w * g[k] * ph;
        ph *= step;
        if ((parity & 127u) == 127u) ph /= std::abs(ph);
    }
    return acc * (dt / 3.0 / kTwoPi);
}

}  // namespace

DensityEstimate estimate_rho(const TripletEstimate& est, const EcfGrid& grid,
                             const EstimatorConfig& cfg) {
    check_grid_config(grid, cfg);
    const double T = grid.cutoff;

    DensityEstimate out;
    out.config = cfg;
    out.x = linspace(cfg.x_grid);
    out.rho_hat.resize(out.x.size());

    // clamped log-transform residual after the closed-form terms are split off
    std::vector<cd> g(grid.t.size());
    for (std::size_t k = 0; k < grid.t.size(); ++k) {
        const double lg = std::clamp(grid.log_modulus[k], -cfg.M_n, cfg.M_n);
        const double ar = std::clamp(grid.unwrapped_arg[k], -cfg.M_n, cfg.M_n);
        g[k] = cd(lg, ar);
    }

    double imag_res = 0.0;
    for (std::size_t j = 0; j < out.x.size(); ++j) {
        const double x = out.x[j];
        const cd closed = cd(0.0, -est.gamma_hat) * dirichlet_term(1, x, T) +
                          est.lambda_hat * dirichlet_term(0, x, T) +
                          0.5 * est.sigma2_hat * dirichlet_term(2, x, T);
        const cd val = closed + spectral_sum(grid.t, g, x, 1);
        out.rho_hat[j] = val.real();
        imag_res = std::max(imag_res, std::abs(val.imag()));
    }
    out.imag_residual = imag_res;

    if ((grid.t.size() - 1) % 4 == 0) {
        double resid = 0.0;
        const std::size_t probes[] = {0, out.x.size() / 4, out.x.size() / 2,
                                      (3 * out.x.size()) / 4, out.x.size() - 1};
        for (const std::size_t j : probes) {
            const cd full = spectral_sum(grid.t, g, out.x[j], 1);
            const cd half = spectral_sum(grid.t, g, out.x[j], 2);
            resid = std::max(resid, std::abs(full - half) / (1.0 + std::abs(full)));
        }
        out.quadrature_residual = resid;
    }
    return out;
}

EcfGrid oracle_grid(const LevyTriplet& tr, const EstimatorConfig& cfg) {
    validate(tr);
    if (!(cfg.h > 0.0) || cfg.grid_size < 3 || cfg.grid_size % 2 == 0)
        throw std::invalid_argument("oracle_grid: bad config");

    EcfGrid grid;
    grid.cutoff = 1.0 / cfg.h;
    const std::size_t m = cfg.grid_size / 2;
    const double dt = grid.cutoff / static_cast<double>(m);
    grid.t.resize(cfg.grid_size);
    grid.values.resize(cfg.grid_size);
    grid.log_modulus.resize(cfg.grid_size);
    grid.unwrapped_arg.resize(cfg.grid_size);
    for (std::size_t k = 0; k < cfg.grid_size; ++k) {
        const double t = dt * (static_cast<double>(k) - static_cast<double>(m));
        grid.t[k] = t;
        grid.values[k] = char_fn_x(tr, t);
        grid.log_modulus[k] = log_modulus_char_fn_x(tr, t);
        grid.unwrapped_arg[k] = arg_char_fn_x(tr, t);
    }
    grid.t[m] = 0.0;
    grid.values[m] = cd(1.0, 0.0);
    grid.log_modulus[m] = 0.0;
    grid.unwrapped_arg[m] = 0.0;
    return grid;
}

}  // namespace levyest
