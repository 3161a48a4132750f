#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace levyest {

// Jump size distributions. Each has a closed-form density, characteristic
// function and finite second moment.
struct GaussianJumps {
    double mean = 0.0;
    double sd = 1.0;
};
struct LaplaceJumps {
    double location = 0.0;
    double scale = 1.0;
};
struct BilateralExpJumps {  // symmetric two-sided exponential, rate > 0
    double rate = 1.0;
};
struct UniformSymJumps {  // uniform on [-halfwidth, halfwidth]
    double halfwidth = 1.0;
};

using JumpDensity =
    std::variant<GaussianJumps, LaplaceJumps, BilateralExpJumps, UniformSymJumps>;

double jump_pdf(const JumpDensity& f, double x);
std::complex<double> jump_char_fn(const JumpDensity& f, double t);
double jump_second_moment(const JumpDensity& f);  // closed form
bool jump_symmetric(const JumpDensity& f);
std::string family_name(const JumpDensity& f);
void validate(const JumpDensity& f);  // throws std::invalid_argument

// Drift + Brownian variance + compound Poisson jump part. sigma2 == 0 and
// lambda == 0 are both legal (degenerate components).
struct LevyTriplet {
    double gamma = 0.0;
    double sigma2 = 0.0;
    double lambda = 0.0;
    JumpDensity jumps = GaussianJumps{};
};
void validate(const LevyTriplet& tr);
LevyTriplet make_triplet(double gamma, double sigma2, double lambda, JumpDensity jumps);

// One-step characteristic function exp(i g t - s2 t^2/2 + lam (phi_f(t) - 1))
std::complex<double> char_fn_x(const LevyTriplet& tr, double t);
// log|char_fn_x| = -lambda + lambda Re phi_f(t) - sigma2 t^2 / 2
double log_modulus_char_fn_x(const LevyTriplet& tr, double t);
// continuous argument of char_fn_x: gamma t + lambda Im phi_f(t)
double arg_char_fn_x(const LevyTriplet& tr, double t);
// jump measure density rho(x) = lambda f(x)
double levy_density(const LevyTriplet& tr, double x);

// Smoothness/size class bounds. All entries strictly positive.
struct ClassParams {
    double beta = 1.0;
    double L = 1.0;       // bound on int |t|^beta |phi_f(t)| dt
    double Lambda = 1.0;  // bound on lambda
    double K = 1.0;       // bound on int x^2 f(x) dx
    double Sigma = 1.0;   // bound on sigma
    double Gamma = 1.0;   // bound on |gamma|
    double C = 1.0;       // bound on int |t|^{2 beta} |phi_f(t)|^2 dt
};
void validate(const ClassParams& p);

struct ClassCheckItem {
    std::string name;
    double value = 0.0;  // NaN when the tail quadrature did not settle
    double bound = 0.0;
    bool pass = false;
    bool divergent = false;
};
struct ClassReport {
    std::vector<ClassCheckItem> items;
    bool all_pass = false;
};
// Evaluates the class integrals numerically and compares every bound.
ClassReport check_class_membership(const LevyTriplet& tr, const ClassParams& p);

}  // namespace levyest
