#include "levyest/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace levyest::io {

using nlohmann::json;

std::string format_double(double v) {
    // shortest decimal form that parses back to the same bits
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string(what) + ": " + e.what());
    }
}

double get_num(const json& j, const char* key, const char* what) {
    if (!j.contains(key))
        fail(std::string(what) + ": missing key '" + key + "'");
    if (!j.at(key).is_number())
        fail(std::string(what) + ": key '" + key + "' must be a number");
    return j.at(key).get<double>();
}

json jump_density_to_json(const JumpDensity& f) {
    json params;
    std::visit(
        [&params](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GaussianJumps>) {
                params = {{"mean", d.mean}, {"sd", d.sd}};
            } else if constexpr (std::is_same_v<T, LaplaceJumps>) {
                params = {{"location", d.location}, {"scale", d.scale}};
            } else if constexpr (std::is_same_v<T, BilateralExpJumps>) {
                params = {{"rate", d.rate}};
            } else {
                params = {{"halfwidth", d.halfwidth}};
            }
        },
        f);
    return {{"family", family_name(f)}, {"params", params}};
}

JumpDensity jump_density_from_json(const json& j) {
    if (!j.contains("family") || !j.at("family").is_string())
        fail("jump_density: missing string key 'family'");
    if (!j.contains("params") || !j.at("params").is_object())
        fail("jump_density: missing object key 'params'");
    const std::string family = j.at("family").get<std::string>();
    const json& p = j.at("params");
    if (family == "gaussian")
        return GaussianJumps{get_num(p, "mean", "gaussian"), get_num(p, "sd", "gaussian")};
    if (family == "laplace")
        return LaplaceJumps{get_num(p, "location", "laplace"), get_num(p, "scale", "laplace")};
    if (family == "bilateral_exponential")
        return BilateralExpJumps{get_num(p, "rate", "bilateral_exponential")};
    if (family == "uniform_sym")
        return UniformSymJumps{get_num(p, "halfwidth", "uniform_sym")};
    fail("jump_density: unknown family '" + family + "'");
}

json class_params_to_json(const ClassParams& p) {
    return {{"beta", p.beta}, {"L", p.L},         {"Lambda", p.Lambda}, {"K", p.K},
            {"Sigma", p.Sigma}, {"Gamma", p.Gamma}, {"C", p.C}};
}

ClassParams class_params_from_json(const json& j) {
    ClassParams p;
    p.beta = get_num(j, "beta", "class");
    p.L = get_num(j, "L", "class");
    p.Lambda = get_num(j, "Lambda", "class");
    p.K = get_num(j, "K", "class");
    p.Sigma = get_num(j, "Sigma", "class");
    p.Gamma = get_num(j, "Gamma", "class");
    p.C = get_num(j, "C", "class");
    validate(p);
    return p;
}

json x_grid_to_json(const XGrid& g) {
    return {{"min", g.min}, {"max", g.max}, {"count", g.count}};
}

XGrid x_grid_from_json(const json& j) {
    XGrid g;
    g.min = get_num(j, "min", "x_grid");
    g.max = get_num(j, "max", "x_grid");
    g.count = static_cast<std::size_t>(get_num(j, "count", "x_grid"));
    return g;
}

}  // namespace

std::string triplet_to_json(const LevyTriplet& tr, const ClassParams* params) {
    json j = {{"gamma", tr.gamma},
              {"sigma2", tr.sigma2},
              {"lambda", tr.lambda},
              {"jump_density", jump_density_to_json(tr.jumps)}};
    if (params) j["class"] = class_params_to_json(*params);
    return j.dump(2) + "\n";
}

void triplet_from_json(const std::string& text, LevyTriplet& tr,
                       std::optional<ClassParams>& params) {
    const json j = parse_json(text, "triplet JSON");
    tr.gamma = get_num(j, "gamma", "triplet");
    tr.sigma2 = get_num(j, "sigma2", "triplet");
    tr.lambda = get_num(j, "lambda", "triplet");
    if (!j.contains("jump_density"))
        fail("triplet: missing key 'jump_density'");
    tr.jumps = jump_density_from_json(j.at("jump_density"));
    try {
        validate(tr);
    } catch (const std::invalid_argument& e) {
        fail(std::string("triplet: ") + e.what());
    }
    params.reset();
    if (j.contains("class")) params = class_params_from_json(j.at("class"));
}

namespace {

json kernel_json(const SpectralKernel& k) {
    json terms = json::array();
    for (const auto& term : k.terms)
        terms.push_back(json::array({term.exponent, term.coefficient}));
    return {{"kind", kind_name(k.kind)}, {"beta", k.beta}, {"terms", terms}};
}

}  // namespace

std::string kernel_to_json(const SpectralKernel& k) {
    return kernel_json(k).dump(2) + "\n";
}

std::string kernel_bundle_to_json(double beta) {
    json out;
    for (const SpectralKernel& k :
         {build_kernel_v(beta), build_kernel_u(beta), build_kernel_w(beta)}) {
        const MomentReport rep = verify_moments(k);
        json checks = json::array();
        for (const auto& chk : rep.checks)
            checks.push_back({{"name", chk.name},
                              {"value", chk.value},
                              {"target", chk.target},
                              {"residual", std::abs(chk.value - chk.target)}});
        out[kind_name(k.kind)] = {{"kernel", kernel_json(k)},
                                  {"moments", checks},
                                  {"max_residual", rep.max_residual},
                                  {"pass", rep.pass}};
    }
    return out.dump(2) + "\n";
}

SpectralKernel kernel_from_json(const std::string& text) {
    const json j = parse_json(text, "kernel JSON");
    SpectralKernel k;
    if (!j.contains("kind") || !j.at("kind").is_string())
        fail("kernel: missing string key 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "v") k.kind = KernelKind::V;
    else if (kind == "u") k.kind = KernelKind::U;
    else if (kind == "w") k.kind = KernelKind::W;
    else fail("kernel: unknown kind '" + kind + "'");
    k.beta = get_num(j, "beta", "kernel");
    if (!j.contains("terms") || !j.at("terms").is_array())
        fail("kernel: missing array key 'terms'");
    for (const json& term : j.at("terms")) {
        if (!term.is_array() || term.size() != 2 || !term[0].is_number() ||
            !term[1].is_number())
            fail("kernel: each term must be [exponent, coefficient]");
        k.terms.push_back({term[0].get<int>(), term[1].get<double>()});
    }
    return k;
}

namespace {

json config_to_json(const EstimatorConfig& cfg) {
    return {{"n", cfg.n},
            {"eta", cfg.eta},
            {"h", cfg.h},
            {"m_n", cfg.m_n},
            {"M_n", cfg.M_n},
            {"beta", cfg.beta},
            {"grid_size", cfg.grid_size},
            {"x_grid", x_grid_to_json(cfg.x_grid)}};
}

}  // namespace

std::string estimate_to_json(const TripletEstimate& est, const EstimatorConfig& cfg) {
    json flags = {{"zero_risk", est.flags.zero_risk},
                  {"zero_modulus", est.flags.zero_modulus},
                  {"truncation_active_sigma", est.flags.truncation_active_sigma},
                  {"truncation_active_lambda", est.flags.truncation_active_lambda},
                  {"truncation_active_gamma", est.flags.truncation_active_gamma}};
    json j = {{"sigma2_hat", est.sigma2_hat},
              {"lambda_hat", est.lambda_hat},
              {"gamma_hat", est.gamma_hat},
              {"flags", flags},
              {"quadrature_residual", est.quadrature_residual},
              {"config", config_to_json(cfg)}};
    return j.dump(2) + "\n";
}

std::string class_report_to_json(const ClassReport& report) {
    json items = json::array();
    for (const auto& item : report.items) {
        json ji = {{"name", item.name},
                   {"bound", item.bound},
                   {"pass", item.pass},
                   {"divergent", item.divergent}};
        if (std::isfinite(item.value)) ji["value"] = item.value;
        else ji["value"] = nullptr;
        items.push_back(ji);
    }
    return json{{"items", items}, {"all_pass", report.all_pass}}.dump(2) + "\n";
}

std::string plan_to_json(const ExperimentPlan& plan) {
    json jt = parse_json(triplet_to_json(plan.triplet, &plan.params), "plan");
    json cfg = json::object();
    if (plan.overrides.eta) cfg["eta"] = *plan.overrides.eta;
    if (plan.overrides.grid_size) cfg["grid_size"] = *plan.overrides.grid_size;
    if (plan.overrides.x_grid) cfg["x_grid"] = x_grid_to_json(*plan.overrides.x_grid);
    json j = {{"triplet", jt},
              {"n_values", plan.n_values},
              {"replicates", plan.replicates},
              {"master_seed", plan.master_seed},
              {"out_dir", plan.out_dir}};
    if (!cfg.empty()) j["config"] = cfg;
    return j.dump(2) + "\n";
}

namespace {

ConfigOverrides overrides_from(const json& j) {
    ConfigOverrides ov;
    if (j.contains("eta")) ov.eta = get_num(j, "eta", "config");
    if (j.contains("grid_size"))
        ov.grid_size = static_cast<std::size_t>(get_num(j, "grid_size", "config"));
    if (j.contains("x_grid")) ov.x_grid = x_grid_from_json(j.at("x_grid"));
    return ov;
}

}  // namespace

ConfigOverrides overrides_from_json(const std::string& text) {
    return overrides_from(parse_json(text, "config JSON"));
}

ExperimentPlan plan_from_json(const std::string& text) {
    const json j = parse_json(text, "plan JSON");
    ExperimentPlan plan;
    if (!j.contains("triplet") || !j.at("triplet").is_object())
        fail("plan: missing object key 'triplet'");
    std::optional<ClassParams> params;
    triplet_from_json(j.at("triplet").dump(), plan.triplet, params);
    if (!params) fail("plan: triplet document must carry a 'class' block");
    plan.params = *params;
    if (!j.contains("n_values") || !j.at("n_values").is_array())
        fail("plan: missing array key 'n_values'");
    for (const json& n : j.at("n_values")) {
        if (!n.is_number_unsigned()) fail("plan: n_values must be positive integers");
        plan.n_values.push_back(n.get<std::size_t>());
    }
    if (!j.contains("replicates") || !j.at("replicates").is_number_unsigned())
        fail("plan: missing unsigned key 'replicates'");
    plan.replicates = j.at("replicates").get<std::size_t>();
    if (!j.contains("master_seed") || !j.at("master_seed").is_number_unsigned())
        fail("plan: missing unsigned key 'master_seed'");
    plan.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("out_dir")) {
        if (!j.at("out_dir").is_string()) fail("plan: 'out_dir' must be a string");
        plan.out_dir = j.at("out_dir").get<std::string>();
    }
    if (j.contains("config")) plan.overrides = overrides_from(j.at("config"));
    try {
        validate(plan);
    } catch (const std::invalid_argument& e) {
        fail(std::string("plan: ") + e.what());
    }
    return plan;
}

// ---- CSV --------------------------------------------------------------------

namespace {

double parse_field(const std::string& field, std::size_t line, const char* what) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0'))
        fail(std::string(what) + " line " + std::to_string(line) +
             ": cannot parse '" + field + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

void write_sample_csv(std::ostream& os, const std::vector<double>& values) {
    for (const double v : values) os << format_double(v) << '\n';
}

std::vector<double> read_sample_csv(std::istream& is) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) {
            if (is.eof()) break;
            fail("sample CSV line " + std::to_string(lineno) + ": empty line");
        }
        out.push_back(parse_field(line, lineno, "sample CSV"));
    }
    if (out.empty()) fail("sample CSV: no values");
    return out;
}

void write_ecf_csv(std::ostream& os, const EcfGrid& grid) {
    os << "t,re,im,log_modulus,unwrapped_arg\n";
    for (std::size_t k = 0; k < grid.t.size(); ++k) {
        os << format_double(grid.t[k]) << ',' << format_double(grid.values[k].real())
           << ',' << format_double(grid.values[k].imag()) << ','
           << format_double(grid.log_modulus[k]) << ','
           << format_double(grid.unwrapped_arg[k]) << '\n';
    }
}

void write_density_csv(std::ostream& os, const DensityEstimate& dens) {
    os << "x,rho_hat\n";
    for (std::size_t j = 0; j < dens.x.size(); ++j)
        os << format_double(dens.x[j]) << ',' << format_double(dens.rho_hat[j]) << '\n';
}

namespace {

const char* kRecordsHeader =
    "n,replicate,seed,failed,sigma2_hat,lambda_hat,gamma_hat,mise,zero_risk,"
    "zero_modulus,truncation_active_sigma,truncation_active_lambda,"
    "truncation_active_gamma,edge_warning,quadrature_residual";

const char* kAggregatesHeader =
    "n,mse_sigma2,mse_lambda,mse_gamma,mean_mise,flag_rate,median_se_sigma2,"
    "median_se_lambda,median_se_gamma,median_mise,used";

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<ReplicateRecord>& recs) {
    os << kRecordsHeader << '\n';
    for (const auto& r : recs) {
        os << r.n << ',' << r.replicate << ',' << r.seed << ',' << (r.failed ? 1 : 0)
           << ',' << format_double(r.est.sigma2_hat) << ','
           << format_double(r.est.lambda_hat) << ',' << format_double(r.est.gamma_hat)
           << ',' << format_double(r.mise) << ',' << (r.est.flags.zero_risk ? 1 : 0)
           << ',' << (r.est.flags.zero_modulus ? 1 : 0) << ','
           << (r.est.flags.truncation_active_sigma ? 1 : 0) << ','
           << (r.est.flags.truncation_active_lambda ? 1 : 0) << ','
           << (r.est.flags.truncation_active_gamma ? 1 : 0) << ','
           << (r.edge_warning ? 1 : 0) << ','
           << format_double(r.est.quadrature_residual) << '\n';
    }
}

std::vector<ReplicateRecord> read_records_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || strip_cr(line) != kRecordsHeader)
        fail("records CSV line 1: bad header");
    std::vector<ReplicateRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty() && is.eof()) break;
        const auto fields = split_csv(line);
        if (fields.size() != 15)
            fail("records CSV line " + std::to_string(lineno) + ": expected 15 fields");
        auto num = [&](std::size_t i) { return parse_field(fields[i], lineno, "records CSV"); };
        ReplicateRecord r;
        r.n = static_cast<std::size_t>(num(0));
        r.replicate = static_cast<std::size_t>(num(1));
        r.seed = static_cast<std::uint64_t>(std::strtoull(fields[2].c_str(), nullptr, 10));
        r.failed = num(3) != 0.0;
        r.est.sigma2_hat = num(4);
        r.est.lambda_hat = num(5);
        r.est.gamma_hat = num(6);
        r.mise = num(7);
        r.est.flags.zero_risk = num(8) != 0.0;
        r.est.flags.zero_modulus = num(9) != 0.0;
        r.est.flags.truncation_active_sigma = num(10) != 0.0;
        r.est.flags.truncation_active_lambda = num(11) != 0.0;
        r.est.flags.truncation_active_gamma = num(12) != 0.0;
        r.edge_warning = num(13) != 0.0;
        r.est.quadrature_residual = num(14);
        out.push_back(r);
    }
    return out;
}

void write_aggregates_csv(std::ostream& os, const std::vector<NAggregate>& aggs) {
    os << kAggregatesHeader << '\n';
    for (const auto& a : aggs) {
        os << a.n << ',' << format_double(a.mse_sigma2) << ','
           << format_double(a.mse_lambda) << ',' << format_double(a.mse_gamma) << ','
           << format_double(a.mean_mise) << ',' << format_double(a.flag_rate) << ','
           << format_double(a.median_se_sigma2) << ','
           << format_double(a.median_se_lambda) << ','
           << format_double(a.median_se_gamma) << ',' << format_double(a.median_mise)
           << ',' << a.used << '\n';
    }
}

std::vector<NAggregate> read_aggregates_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || strip_cr(line) != kAggregatesHeader)
        fail("aggregates CSV line 1: bad header");
    std::vector<NAggregate> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty() && is.eof()) break;
        const auto fields = split_csv(line);
        if (fields.size() != 11)
            fail("aggregates CSV line " + std::to_string(lineno) + ": expected 11 fields");
        auto num = [&](std::size_t i) { return parse_field(fields[i], lineno, "aggregates CSV"); };
        NAggregate a;
        a.n = static_cast<std::size_t>(num(0));
        a.mse_sigma2 = num(1);
        a.mse_lambda = num(2);
        a.mse_gamma = num(3);
        a.mean_mise = num(4);
        a.flag_rate = num(5);
        a.median_se_sigma2 = num(6);
        a.median_se_lambda = num(7);
        a.median_se_gamma = num(8);
        a.median_mise = num(9);
        a.used = static_cast<std::size_t>(num(10));
        out.push_back(a);
    }
    return out;
}

void write_result(const ExperimentResult& result) {
    namespace fs = std::filesystem;
    const fs::path dir(result.plan.out_dir.empty() ? "." : result.plan.out_dir);
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "plan.json", std::ios::binary);
        if (!os) fail("write_result: cannot open plan.json");
        os << plan_to_json(result.plan);
    }
    {
        std::ofstream os(dir / "records.csv", std::ios::binary);
        if (!os) fail("write_result: cannot open records.csv");
        write_records_csv(os, result.records);
    }
    {
        std::ofstream os(dir / "aggregates.csv", std::ios::binary);
        if (!os) fail("write_result: cannot open aggregates.csv");
        write_aggregates_csv(os, result.aggregates);
    }
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) fail("cannot open " + p.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

bool close_enough(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return std::abs(a - b) <= 1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ExperimentResult read_result(const std::string& dir) {
    namespace fs = std::filesystem;
    ExperimentResult result;
    result.plan = plan_from_json(read_file(fs::path(dir) / "plan.json"));
    {
        std::ifstream is(fs::path(dir) / "records.csv", std::ios::binary);
        if (!is) fail("cannot open records.csv");
        result.records = read_records_csv(is);
    }
    {
        std::ifstream is(fs::path(dir) / "aggregates.csv", std::ios::binary);
        if (!is) fail("cannot open aggregates.csv");
        result.aggregates = read_aggregates_csv(is);
    }
    const auto recomputed = aggregate_records(result.plan, result.records);
    if (recomputed.size() != result.aggregates.size())
        fail("read_result: aggregate row count mismatch");
    for (std::size_t i = 0; i < recomputed.size(); ++i) {
        const auto& a = result.aggregates[i];
        const auto& b = recomputed[i];
        const bool ok = a.n == b.n && close_enough(a.mse_sigma2, b.mse_sigma2) &&
                        close_enough(a.mse_lambda, b.mse_lambda) &&
                        close_enough(a.mse_gamma, b.mse_gamma) &&
                        close_enough(a.mean_mise, b.mean_mise) &&
                        close_enough(a.flag_rate, b.flag_rate) &&
                        close_enough(a.median_se_sigma2, b.median_se_sigma2) &&
                        close_enough(a.median_se_lambda, b.median_se_lambda) &&
                        close_enough(a.median_se_gamma, b.median_se_gamma) &&
                        close_enough(a.median_mise, b.median_mise) && a.used == b.used;
        if (!ok)
            fail("read_result: stored aggregates disagree with the records at n = " +
                 std::to_string(a.n));
    }
    return result;
}

}  // namespace levyest::io
