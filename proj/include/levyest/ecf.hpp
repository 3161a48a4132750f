#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace levyest {

// Modulus below which a transform value is treated as an exact zero: the
// phase-continuous logarithm is undefined past such a point.
inline constexpr double kModulusFloor = 1e-300;

// Thrown when phase steps stay above pi/2 after the refinement cap.
struct unresolved_winding : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Empirical (or exact) characteristic function tabulated on a symmetric
// uniform grid over [-cutoff, cutoff] with an odd node count, so t = 0 is a
// node and values[center()] == 1. Hermitian by construction. Filled once,
// then read-only.
struct EcfGrid {
    double cutoff = 0.0;
    std::vector<double> t;
    std::vector<std::complex<double>> values;
    std::vector<double> log_modulus;
    std::vector<double> unwrapped_arg;
    bool zero_modulus = false;  // a modulus fell below kModulusFloor;
                                // unwrapped_arg was assigned the value 0
    bool zero_risk = false;     // set by zero_risk_diagnostic
    std::size_t center() const { return t.size() / 2; }
};

using CharFnEval = std::function<std::complex<double>(double)>;

// Direct average (1/n) sum_j e^{i t X_j} on the grid. Fills values only;
// compose with dist_log (or use ecf_log_grid) for the log fields.
// sample must be nonempty, cutoff > 0, grid_size odd and >= 3.
EcfGrid compute_ecf(std::span<const double> sample, double cutoff,
                    std::size_t grid_size);

// Exact transform of the sample at arbitrary t, for winding refinement.
// Owns a copy of the sample.
CharFnEval make_ecf_evaluator(std::span<const double> sample);

// compute_ecf followed by dist_log with the sample-bound evaluator.
EcfGrid ecf_log_grid(std::span<const double> sample, double cutoff,
                     std::size_t grid_size);

// Phase-continuous logarithm along the grid: fills log_modulus (floor-guarded)
// and unwrapped_arg by accumulating principal arguments of successive ratios
// outward from t = 0. Steps larger than pi/2 trigger dyadic grid refinement
// through eval (up to 4 doublings); without eval, or past the cap, throws
// unresolved_winding. A modulus under kModulusFloor sets zero_modulus and
// assigns the arbitrary value 0 to the argument instead.
EcfGrid dist_log(EcfGrid grid, const CharFnEval& eval = nullptr);

// log_modulus clamped to [-M, M]; M >= 0.
std::vector<double> truncate_log_modulus(const EcfGrid& grid, double M);

struct ZeroRiskReport {
    bool flagged = false;
    double threshold = 0.0;   // (1/2) exp(-2 Lambda - Sigma^2 / (2 h^2))
    double min_modulus = 0.0;
    double margin = 0.0;      // min_modulus - threshold
};
// Compares the smallest modulus on the grid against the safety threshold and
// records the outcome on the grid. Lambda, Sigma, h > 0.
ZeroRiskReport zero_risk_diagnostic(EcfGrid& grid, double Lambda, double Sigma,
                                    double h);

}  // namespace levyest
