#include "levyest/harness.hpp"

#include <algorithm>
#include <cmath>

#include "levyest/quadrature.hpp"

namespace levyest {

EstimatorConfig make_config(std::size_t n, const ClassParams& params,
                            const ConfigOverrides& ov) {
    EstimatorConfig cfg = default_config(n, params);
    if (ov.eta) {
        const double eta = *ov.eta;
        if (!(eta > 0.0) || !(eta < 1.0 / (params.Sigma * params.Sigma)))
            throw std::invalid_argument("config override: eta must lie in (0, Sigma^-2)");
        cfg.eta = eta;
        cfg.h = 1.0 / std::sqrt(eta * std::log(static_cast<double>(n)));
        cfg.M_n = cfg.m_n / (cfg.h * cfg.h);
    }
    if (ov.grid_size) {
        if (*ov.grid_size < 3 || *ov.grid_size % 2 == 0)
            throw std::invalid_argument("config override: grid_size must be odd and >= 3");
        cfg.grid_size = *ov.grid_size;
    }
    if (ov.x_grid) {
        if (ov.x_grid->count < 2 || !(ov.x_grid->max > ov.x_grid->min))
            throw std::invalid_argument("config override: bad x grid");
        cfg.x_grid = *ov.x_grid;
    }
    return cfg;
}

void validate(const ExperimentPlan& plan) {
    validate(plan.triplet);
    validate(plan.params);
    if (plan.n_values.empty())
        throw std::invalid_argument("plan: n_values must be nonempty");
    for (std::size_t i = 0; i < plan.n_values.size(); ++i) {
        if (plan.n_values[i] < 16)
            throw std::invalid_argument("plan: every n must be >= 16");
        if (i > 0 && plan.n_values[i] <= plan.n_values[i - 1])
            throw std::invalid_argument("plan: n_values must be strictly increasing");
    }
    if (plan.replicates < 1)
        throw std::invalid_argument("plan: replicates must be >= 1");
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t n, std::size_t r) {
    std::uint64_t state = master;
    splitmix64(state);
    state ^= 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(n);
    splitmix64(state);
    state ^= 0xC2B2AE3D27D4EB4Full * static_cast<std::uint64_t>(r + 1);
    return splitmix64(state);
}

bool flagged(const ReplicateRecord& rec) {
    return rec.failed || rec.est.flags.zero_risk || rec.est.flags.zero_modulus;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<NAggregate> aggregate_records(const ExperimentPlan& plan,
                                          const std::vector<ReplicateRecord>& recs) {
    std::vector<NAggregate> out;
    for (const std::size_t n : plan.n_values) {
        NAggregate agg;
        agg.n = n;
        std::vector<double> se_s, se_l, se_g, mises;
        std::size_t total = 0, nflagged = 0;
        for (const auto& rec : recs) {
            if (rec.n != n) continue;
            ++total;
            if (flagged(rec)) ++nflagged;
            if (rec.failed) continue;  // no usable estimate
            const double ds = rec.est.sigma2_hat - plan.triplet.sigma2;
            const double dl = rec.est.lambda_hat - plan.triplet.lambda;
            const double dg = rec.est.gamma_hat - plan.triplet.gamma;
            se_s.push_back(ds * ds);
            se_l.push_back(dl * dl);
            se_g.push_back(dg * dg);
            mises.push_back(rec.mise);
        }
        agg.used = se_s.size();
        if (agg.used > 0) {
            auto mean = [](const std::vector<double>& v) {
                double s = 0.0;
                for (const double x : v) s += x;
                return s / static_cast<double>(v.size());
            };
            agg.mse_sigma2 = mean(se_s);
            agg.mse_lambda = mean(se_l);
            agg.mse_gamma = mean(se_g);
            agg.mean_mise = mean(mises);
            agg.median_se_sigma2 = median(se_s);
            agg.median_se_lambda = median(se_l);
            agg.median_se_gamma = median(se_g);
            agg.median_mise = median(mises);
        }
        agg.flag_rate = total == 0 ? 0.0
                                   : static_cast<double>(nflagged) /
                                         static_cast<double>(total);
        out.push_back(agg);
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
    validate(plan);

    ExperimentResult result;
    result.plan = plan;
    for (const std::size_t n : plan.n_values) {
        const EstimatorConfig cfg = make_config(n, plan.params, plan.overrides);
        for (std::size_t r = 0; r < plan.replicates; ++r) {
            ReplicateRecord rec;
            rec.n = n;
            rec.replicate = r;
            rec.seed = replicate_seed(plan.master_seed, n, r);
            try {
                const IncrementSample sample =
                    simulate_increments(plan.triplet, n, rec.seed);
                EcfGrid grid = ecf_log_grid(sample.values, cfg.cutoff(), cfg.grid_size);
                zero_risk_diagnostic(grid, plan.params.Lambda, plan.params.Sigma, cfg.h);
                rec.est = estimate_triplet(grid, cfg);
                const DensityEstimate dens = estimate_rho(rec.est, grid, cfg);
                const MiseResult m = mise(dens, plan.triplet);
                rec.mise = m.value;
                rec.edge_warning = m.edge_warning;
            } catch (const unresolved_winding&) {
                rec.failed = true;
            }
            result.records.push_back(rec);
        }
    }
    result.aggregates = aggregate_records(plan, result.records);
    for (const auto& agg : result.aggregates) {
        if (agg.flag_rate > 0.5)
            throw numerical_failure("experiment: flag rate above 50% at n = " +
                                    std::to_string(agg.n));
    }
    return result;
}

MiseResult mise(const DensityEstimate& dens, const LevyTriplet& truth) {
    if (dens.x.size() != dens.rho_hat.size() || dens.x.size() < 2)
        throw std::invalid_argument("mise: malformed density estimate");
    MiseResult out;
    std::vector<double> sq(dens.x.size());
    for (std::size_t j = 0; j < dens.x.size(); ++j) {
        const double diff = dens.rho_hat[j] - levy_density(truth, dens.x[j]);
        sq[j] = diff * diff;
    }
    out.value = trapezoid(sq, dens.x[1] - dens.x[0]);
    out.edge_warning = std::abs(levy_density(truth, dens.x.front())) > 1e-6 ||
                       std::abs(levy_density(truth, dens.x.back())) > 1e-6;
    return out;
}

}  // namespace levyest
