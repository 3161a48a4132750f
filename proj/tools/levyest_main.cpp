#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "levyest/ecf.hpp"
#include "levyest/estimators.hpp"
#include "levyest/harness.hpp"
#include "levyest/io.hpp"
#include "levyest/kernels.hpp"
#include "levyest/model.hpp"
#include "levyest/simulate.hpp"

namespace fs = std::filesystem;
using namespace levyest;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io::ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io::ParseError("cannot open " + path.string());
    os << text;
}

struct TripletDoc {
    LevyTriplet triplet;
    std::optional<ClassParams> params;
};

TripletDoc load_triplet(const std::string& path) {
    TripletDoc doc;
    io::triplet_from_json(read_file(path), doc.triplet, doc.params);
    return doc;
}

ClassParams require_class(const TripletDoc& doc, const char* what) {
    if (!doc.params)
        throw io::ParseError(std::string(what) +
                             ": triplet document must carry a 'class' block");
    return *doc.params;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral estimation of the triplet (drift, diffusion, jump measure)\n"
                 "of a finite-activity Levy process from unit-spaced increments"};
    app.require_subcommand(1);

    // simulate
    std::string sim_triplet, sim_out = ".";
    std::uint64_t sim_seed = 1;
    std::size_t sim_n = 0;
    auto* sim = app.add_subcommand("simulate", "draw increments from a triplet");
    sim->add_option("--triplet", sim_triplet, "triplet JSON document")->required();
    sim->add_option("--n", sim_n, "number of increments")->required();
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "output directory");
    sim->callback([&] {
        const TripletDoc doc = load_triplet(sim_triplet);
        const IncrementSample sample = simulate_increments(doc.triplet, sim_n, sim_seed);
        std::ostringstream os;
        io::write_sample_csv(os, sample.values);
        write_file(fs::path(sim_out) / "sample.csv", os.str());
        std::cout << (fs::path(sim_out) / "sample.csv").string() << "\n";
    });

    // estimate
    std::string est_data, est_triplet, est_out = ".", est_config;
    std::optional<double> est_eta;
    std::optional<std::size_t> est_grid;
    bool est_dump_ecf = false;
    auto* est = app.add_subcommand("estimate", "estimate the triplet from increments");
    est->add_option("--data", est_data, "increments CSV, one value per line")->required();
    est->add_option("--triplet", est_triplet, "triplet JSON with the class block")
        ->required();
    est->add_option("--config", est_config, "JSON with config overrides");
    est->add_option("--eta", est_eta, "bandwidth exponent override");
    est->add_option("--grid-size", est_grid, "quadrature grid size (odd)");
    est->add_option("--out", est_out, "output directory");
    est->add_flag("--dump-ecf", est_dump_ecf, "also write the transform grid CSV");
    est->callback([&] {
        const TripletDoc doc = load_triplet(est_triplet);
        const ClassParams params = require_class(doc, "estimate");
        std::istringstream is(read_file(est_data));
        const std::vector<double> values = io::read_sample_csv(is);

        ConfigOverrides ov;
        if (!est_config.empty()) ov = io::overrides_from_json(read_file(est_config));
        if (est_eta) ov.eta = est_eta;
        if (est_grid) ov.grid_size = est_grid;
        const EstimatorConfig cfg = make_config(values.size(), params, ov);

        EcfGrid grid = ecf_log_grid(values, cfg.cutoff(), cfg.grid_size);
        zero_risk_diagnostic(grid, params.Lambda, params.Sigma, cfg.h);
        const TripletEstimate triplet_est = estimate_triplet(grid, cfg);
        const DensityEstimate dens = estimate_rho(triplet_est, grid, cfg);

        write_file(fs::path(est_out) / "estimate.json",
                   io::estimate_to_json(triplet_est, cfg));
        std::ostringstream dos;
        io::write_density_csv(dos, dens);
        write_file(fs::path(est_out) / "density.csv", dos.str());
        if (est_dump_ecf) {
            std::ostringstream eos;
            io::write_ecf_csv(eos, grid);
            write_file(fs::path(est_out) / "ecf.csv", eos.str());
        }
        std::cout << (fs::path(est_out) / "estimate.json").string() << "\n"
                  << (fs::path(est_out) / "density.csv").string() << "\n";
    });

    // experiment
    std::string exp_plan, exp_out;
    std::optional<std::uint64_t> exp_seed;
    std::optional<double> exp_eta;
    std::optional<std::size_t> exp_grid;
    auto* exp = app.add_subcommand("experiment", "Monte Carlo risk sweep over n");
    exp->add_option("--plan", exp_plan, "experiment plan JSON")->required();
    exp->add_option("--out", exp_out, "output directory (overrides the plan)");
    exp->add_option("--seed", exp_seed, "master seed override");
    exp->add_option("--eta", exp_eta, "bandwidth exponent override");
    exp->add_option("--grid-size", exp_grid, "quadrature grid size override");
    exp->callback([&] {
        ExperimentPlan plan = io::plan_from_json(read_file(exp_plan));
        if (!exp_out.empty()) plan.out_dir = exp_out;
        if (exp_seed) plan.master_seed = *exp_seed;
        if (exp_eta) plan.overrides.eta = exp_eta;
        if (exp_grid) plan.overrides.grid_size = exp_grid;
        const ExperimentResult result = run_experiment(plan);
        io::write_result(result);
        std::cout << (fs::path(plan.out_dir) / "aggregates.csv").string() << "\n";
    });

    // kernels
    double ker_beta = 0.0;
    std::string ker_out;
    auto* ker = app.add_subcommand("kernels", "emit the spectral kernels for a beta");
    ker->add_option("--beta", ker_beta, "smoothness order (> 0)")->required();
    ker->add_option("--out", ker_out, "output directory (default: stdout)");
    ker->callback([&] {
        const std::string doc = io::kernel_bundle_to_json(ker_beta);
        if (ker_out.empty()) {
            std::cout << doc;
        } else {
            write_file(fs::path(ker_out) / "kernels.json", doc);
            std::cout << (fs::path(ker_out) / "kernels.json").string() << "\n";
        }
    });

    // check-class
    std::string chk_triplet;
    auto* chk = app.add_subcommand("check-class", "evaluate the class bounds for a triplet");
    chk->add_option("--triplet", chk_triplet, "triplet JSON with the class block")
        ->required();
    chk->callback([&] {
        const TripletDoc doc = load_triplet(chk_triplet);
        const ClassParams params = require_class(doc, "check-class");
        std::cout << io::class_report_to_json(check_class_membership(doc.triplet, params));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const unresolved_winding& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const numerical_failure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const io::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
