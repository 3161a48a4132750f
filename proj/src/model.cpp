#include "levyest/model.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "levyest/quadrature.hpp"

namespace levyest {

namespace {

constexpr double kPi = 3.14159265358979323846;

// sin(z)/z with a series branch to keep the removable singularity smooth
double sinc(double z) {
    if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

}  // namespace

double jump_pdf(const JumpDensity& f, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GaussianJumps>) {
                const double z = (x - d.mean) / d.sd;
                return std::exp(-0.5 * z * z) / (d.sd * std::sqrt(2.0 * kPi));
            } else if constexpr (std::is_same_v<T, LaplaceJumps>) {
                return std::exp(-std::abs(x - d.location) / d.scale) / (2.0 * d.scale);
            } else if constexpr (std::is_same_v<T, BilateralExpJumps>) {
                return 0.5 * d.rate * std::exp(-d.rate * std::abs(x));
            } else {
                return std::abs(x) <= d.halfwidth ? 0.5 / d.halfwidth : 0.0;
            }
        },
        f);
}

std::complex<double> jump_char_fn(const JumpDensity& f, double t) {
    using cd = std::complex<double>;
    return std::visit(
        [t](const auto& d) -> cd {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GaussianJumps>) {
                return std::exp(cd(-0.5 * d.sd * d.sd * t * t, d.mean * t));
            } else if constexpr (std::is_same_v<T, LaplaceJumps>) {
                const double den = 1.0 + d.scale * d.scale * t * t;
                return std::exp(cd(0.0, d.location * t)) / den;
            } else if constexpr (std::is_same_v<T, BilateralExpJumps>) {
                return cd(1.0 / (1.0 + t * t / (d.rate * d.rate)), 0.0);
            } else {
                return cd(sinc(d.halfwidth * t), 0.0);
            }
        },
        f);
}

double jump_second_moment(const JumpDensity& f) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GaussianJumps>) {
                return d.mean * d.mean + d.sd * d.sd;
            } else if constexpr (std::is_same_v<T, LaplaceJumps>) {
                return d.location * d.location + 2.0 * d.scale * d.scale;
            } else if constexpr (std::is_same_v<T, BilateralExpJumps>) {
                return 2.0 / (d.rate * d.rate);
            } else {
                return d.halfwidth * d.halfwidth / 3.0;
            }
        },
        f);
}

bool jump_symmetric(const JumpDensity& f) {
    return std::visit(
        [](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GaussianJumps>) return d.mean == 0.0;
            else if constexpr (std::is_same_v<T, LaplaceJumps>) return d.location == 0.0;
            else return true;
        },
        f);
}

std::string family_name(const JumpDensity& f) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, GaussianJumps>) return "gaussian";
            else if constexpr (std::is_same_v<T, LaplaceJumps>) return "laplace";
            else if constexpr (std::is_same_v<T, BilateralExpJumps>) return "bilateral_exponential";
            else return "uniform_sym";
        },
        f);
}

void validate(const JumpDensity& f) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            auto positive = [](double v, const char* what) {
                if (!(v > 0.0) || !std::isfinite(v))
                    throw std::invalid_argument(std::string("jump density: ") + what +
                                                " must be positive and finite");
            };
            if constexpr (std::is_same_v<T, GaussianJumps>) {
                if (!std::isfinite(d.mean))
                    throw std::invalid_argument("jump density: mean must be finite");
                positive(d.sd, "sd");
            } else if constexpr (std::is_same_v<T, LaplaceJumps>) {
                if (!std::isfinite(d.location))
                    throw std::invalid_argument("jump density: location must be finite");
                positive(d.scale, "scale");
            } else if constexpr (std::is_same_v<T, BilateralExpJumps>) {
                positive(d.rate, "rate");
            } else {
                positive(d.halfwidth, "halfwidth");
            }
        },
        f);
}

void validate(const LevyTriplet& tr) {
    if (!std::isfinite(tr.gamma))
        throw std::invalid_argument("triplet: gamma must be finite");
    if (!(tr.sigma2 >= 0.0) || !std::isfinite(tr.sigma2))
        throw std::invalid_argument("triplet: sigma2 must be >= 0 and finite");
    if (!(tr.lambda >= 0.0) || !std::isfinite(tr.lambda))
        throw std::invalid_argument("triplet: lambda must be >= 0 and finite");
    validate(tr.jumps);
}

LevyTriplet make_triplet(double gamma, double sigma2, double lambda, JumpDensity jumps) {
    LevyTriplet tr{gamma, sigma2, lambda, std::move(jumps)};
    validate(tr);
    return tr;
}

std::complex<double> char_fn_x(const LevyTriplet& tr, double t) {
    const std::complex<double> phi_f = jump_char_fn(tr.jumps, t);
    const std::complex<double> expo(
        -0.5 * tr.sigma2 * t * t + tr.lambda * (phi_f.real() - 1.0),
        tr.gamma * t + tr.lambda * phi_f.imag());
    return std::exp(expo);
}

double log_modulus_char_fn_x(const LevyTriplet& tr, double t) {
    return -tr.lambda + tr.lambda * jump_char_fn(tr.jumps, t).real() -
           0.5 * tr.sigma2 * t * t;
}

double arg_char_fn_x(const LevyTriplet& tr, double t) {
    return tr.gamma * t + tr.lambda * jump_char_fn(tr.jumps, t).imag();
}

double levy_density(const LevyTriplet& tr, double x) {
    return tr.lambda * jump_pdf(tr.jumps, x);
}

void validate(const ClassParams& p) {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("class params: ") + what +
                                        " must be positive and finite");
    };
    positive(p.beta, "beta");
    positive(p.L, "L");
    positive(p.Lambda, "Lambda");
    positive(p.K, "K");
    positive(p.Sigma, "Sigma");
    positive(p.Gamma, "Gamma");
    positive(p.C, "C");
}

namespace {

struct TailIntegral {
    double value = 0.0;
    bool divergent = false;
};

// Integral of a nonnegative integrand over the real line: a dense core panel
// on [-1, 1] plus dyadic shells [2^k, 2^{k+1}] on both sides. Shell sums of a
// polynomially decaying integrand are asymptotically geometric, so once the
// ratio of successive shells settles below 1 the remaining tail is added in
// closed form. Shells that stop decaying mark the integral divergent.
TailIntegral integrate_real_line(const std::function<double(double)>& g) {
    constexpr int kMaxShells = 60;
    constexpr std::size_t kCoreNodes = 8193;
    constexpr std::size_t kShellNodes = 2049;

    TailIntegral out;
    out.value = simpson_fn(g, -1.0, 1.0, kCoreNodes);

    double prev_shell = -1.0, prev_ratio = -1.0;
    int flat_count = 0;
    for (int k = 0; k < kMaxShells; ++k) {
        const double a = std::ldexp(1.0, k), b = std::ldexp(1.0, k + 1);
        const double shell = simpson_fn(g, a, b, kShellNodes) +
                             simpson_fn(g, -b, -a, kShellNodes);
        out.value += shell;

        if (shell <= 1e-14 * std::max(1.0, out.value)) return out;  // settled

        if (prev_shell > 0.0) {
            const double ratio = shell / prev_shell;
            if (ratio >= 0.98) {
                if (++flat_count >= 3) {  // not decaying
                    out.divergent = true;
                    out.value = std::numeric_limits<double>::quiet_NaN();
                    return out;
                }
            } else {
                flat_count = 0;
            }
            // stable geometric decay: extrapolate the remaining tail
            if (prev_ratio > 0.0 && ratio < 0.97 &&
                std::abs(ratio - prev_ratio) < 0.005) {
                out.value += shell * ratio / (1.0 - ratio);
                return out;
            }
            prev_ratio = ratio;
        }
        prev_shell = shell;
    }
    out.divergent = true;
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace

ClassReport check_class_membership(const LevyTriplet& tr, const ClassParams& p) {
    validate(tr);
    validate(p);
    ClassReport rep;

    auto push_scalar = [&rep](std::string name, double value, double bound) {
        rep.items.push_back({std::move(name), value, bound, value <= bound, false});
    };
    push_scalar("lambda_bound", tr.lambda, p.Lambda);
    push_scalar("sigma_bound", std::sqrt(tr.sigma2), p.Sigma);
    push_scalar("gamma_bound", std::abs(tr.gamma), p.Gamma);

    auto push_integral = [&rep](std::string name, const TailIntegral& ti, double bound) {
        rep.items.push_back({std::move(name), ti.value, bound,
                             !ti.divergent && ti.value <= bound, ti.divergent});
    };

    const JumpDensity& f = tr.jumps;
    push_integral("second_moment",
                  integrate_real_line([&f](double x) { return x * x * jump_pdf(f, x); }),
                  p.K);
    const double beta = p.beta;
    push_integral("smoothness_integral",
                  integrate_real_line([&f, beta](double t) {
                      return std::pow(std::abs(t), beta) * std::abs(jump_char_fn(f, t));
                  }),
                  p.L);
    push_integral("energy_integral",
                  integrate_real_line([&f, beta](double t) {
                      const double m = std::abs(jump_char_fn(f, t));
                      return std::pow(std::abs(t), 2.0 * beta) * m * m;
                  }),
                  p.C);

    rep.all_pass = true;
    for (const auto& item : rep.items) rep.all_pass = rep.all_pass && item.pass;
    return rep;
}

}  // namespace levyest
