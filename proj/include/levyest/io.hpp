#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyest/ecf.hpp"
#include "levyest/estimators.hpp"
#include "levyest/harness.hpp"
#include "levyest/kernels.hpp"
#include "levyest/model.hpp"
#include "levyest/simulate.hpp"

namespace levyest::io {

// Malformed document; message carries a line number for CSV input.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form of a double (%.17g, trimmed).
std::string format_double(double v);

// ---- JSON ------------------------------------------------------------------
std::string triplet_to_json(const LevyTriplet& tr,
                            const ClassParams* params = nullptr);
void triplet_from_json(const std::string& text, LevyTriplet& tr,
                       std::optional<ClassParams>& params);

std::string kernel_to_json(const SpectralKernel& k);
SpectralKernel kernel_from_json(const std::string& text);
// v, u, w kernels for one beta, each with its re-integrated moment report.
std::string kernel_bundle_to_json(double beta);

std::string estimate_to_json(const TripletEstimate& est,
                             const EstimatorConfig& cfg);
std::string class_report_to_json(const ClassReport& report);

std::string plan_to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const std::string& text);
ConfigOverrides overrides_from_json(const std::string& text);

// ---- CSV -------------------------------------------------------------------
void write_sample_csv(std::ostream& os, const std::vector<double>& values);
std::vector<double> read_sample_csv(std::istream& is);

void write_ecf_csv(std::ostream& os, const EcfGrid& grid);
void write_density_csv(std::ostream& os, const DensityEstimate& dens);

void write_records_csv(std::ostream& os, const std::vector<ReplicateRecord>& recs);
std::vector<ReplicateRecord> read_records_csv(std::istream& is);

void write_aggregates_csv(std::ostream& os, const std::vector<NAggregate>& aggs);
std::vector<NAggregate> read_aggregates_csv(std::istream& is);

// Writes plan.json, records.csv, aggregates.csv under result.plan.out_dir.
void write_result(const ExperimentResult& result);
// Reads them back; recomputes aggregates from the records and requires
// agreement within 1e-14 before returning.
ExperimentResult read_result(const std::string& dir);

}  // namespace levyest::io
