#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyest/estimators.hpp"
#include "levyest/model.hpp"
#include "levyest/simulate.hpp"

namespace levyest {

struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigOverrides {
    std::optional<double> eta;
    std::optional<std::size_t> grid_size;
    std::optional<XGrid> x_grid;
};
// default_config(n, params) with overrides applied (eta re-derives h and M_n).
EstimatorConfig make_config(std::size_t n, const ClassParams& params,
                            const ConfigOverrides& ov);

struct ExperimentPlan {
    LevyTriplet triplet;
    ClassParams params;
    std::vector<std::size_t> n_values;  // strictly increasing, all >= 16
    std::size_t replicates = 1;
    std::uint64_t master_seed = 1;
    ConfigOverrides overrides;
    std::string out_dir = ".";
};
void validate(const ExperimentPlan& plan);

// Stream seed for replicate r of the n-level sweep.
std::uint64_t replicate_seed(std::uint64_t master, std::size_t n, std::size_t r);

struct ReplicateRecord {
    std::size_t n = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    bool failed = false;  // unresolved winding; excluded from aggregates
    TripletEstimate est;
    double mise = 0.0;
    bool edge_warning = false;
};
// flagged == counted in flag_rate
bool flagged(const ReplicateRecord& rec);

struct NAggregate {
    std::size_t n = 0;
    double mse_sigma2 = 0.0;
    double mse_lambda = 0.0;
    double mse_gamma = 0.0;
    double mean_mise = 0.0;
    double flag_rate = 0.0;
    // robustness companions to the means
    double median_se_sigma2 = 0.0;
    double median_se_lambda = 0.0;
    double median_se_gamma = 0.0;
    double median_mise = 0.0;
    std::size_t used = 0;  // replicates contributing to the means
};

struct ExperimentResult {
    ExperimentPlan plan;
    std::vector<ReplicateRecord> records;   // ordered by (n, replicate)
    std::vector<NAggregate> aggregates;     // ordered by n
};

std::vector<NAggregate> aggregate_records(const ExperimentPlan& plan,
                                          const std::vector<ReplicateRecord>& recs);

// Full sweep: simulate -> ecf -> diagnostics -> estimates -> density -> mise,
// one record per (n, replicate). Throws numerical_failure if more than half
// the replicates at some n are flagged.
ExperimentResult run_experiment(const ExperimentPlan& plan);

struct MiseResult {
    double value = 0.0;
    bool edge_warning = false;  // true density swamps the grid edge (> 1e-6)
};
// Trapezoid of (rho_hat - lambda f)^2 over the x grid.
MiseResult mise(const DensityEstimate& dens, const LevyTriplet& truth);

}  // namespace levyest
