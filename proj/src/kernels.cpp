#include "levyest/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "levyest/quadrature.hpp"

namespace levyest {

namespace {
constexpr double kPi = 3.14159265358979323846;

// smallest p with 2p >= beta
int half_order(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("kernel: beta must be positive and finite");
    int p = static_cast<int>(std::ceil(beta / 2.0));
    return p < 1 ? 1 : p;
}
}  // namespace

double SpectralKernel::operator()(double t) const {
    if (std::abs(t) > 1.0) return 0.0;
    double acc = 0.0;
    for (const auto& term : terms)
        acc += term.coefficient * std::pow(t, term.exponent);
    return acc;
}

double SpectralKernel::scaled(double h, double t) const {
    return std::pow(h, scale_power(kind)) * (*this)(h * t);
}

int scale_power(KernelKind kind) {
    switch (kind) {
        case KernelKind::V: return 3;
        case KernelKind::U: return 1;
        case KernelKind::W: return 2;
    }
    throw std::logic_error("scale_power: bad kind");
}

std::string kind_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::V: return "v";
        case KernelKind::U: return "u";
        case KernelKind::W: return "w";
    }
    throw std::logic_error("kind_name: bad kind");
}

// Both even-exponent kernels solve a 2x2 moment system over [-1, 1] with
// int t^q = 2/(q+1); eliminating one unknown leaves integer products over a
// power-of-two denominator, so the coefficients are exact in binary.
SpectralKernel build_kernel_v(double beta) {
    const int q = 2 * half_order(beta);
    // int v = 0, int (-t^2/2) v = 1
    const double a = static_cast<double>((q + 1) * (q + 3) * (q + 5)) / 4.0;
    const double b = -static_cast<double>((q + 3) * (q + 3) * (q + 5)) / 4.0;
    return SpectralKernel{KernelKind::V, beta, {{q, a}, {q + 2, b}}};
}

SpectralKernel build_kernel_u(double beta) {
    const int q = 2 * half_order(beta);
    // int u = -1, int t^2 u = 0
    const double a = -static_cast<double>((q + 1) * (q + 3) * (q + 3)) / 8.0;
    const double b = static_cast<double>((q + 1) * (q + 3) * (q + 5)) / 8.0;
    return SpectralKernel{KernelKind::U, beta, {{q, a}, {q + 2, b}}};
}

SpectralKernel build_kernel_w(double beta) {
    const int p = half_order(beta);
    // int t w = 1 with the single odd exponent 2p+1
    const double c = static_cast<double>(2 * p + 3) / 2.0;
    return SpectralKernel{KernelKind::W, beta, {{2 * p + 1, c}}};
}

std::complex<double> dirichlet_term(int order, double x, double T) {
    using cd = std::complex<double>;
    if (order < 0 || order > 2)
        throw std::invalid_argument("dirichlet_term: order must be 0, 1 or 2");
    if (!(T > 0.0))
        throw std::invalid_argument("dirichlet_term: T must be positive");

    const double u = x * T;
    if (std::abs(u) < 0.1) {
        // The sine/cosine forms below cancel catastrophically for small u
        // (error ~ eps/u^2 of the leading term), so switch to the series well
        // before that; five terms keep the truncation under 1e-13 relative at
        // the boundary, comfortably past the cancellation crossover.
        const double u2 = u * u;
        switch (order) {
            case 0:
                return cd(T / kPi *
                              (1.0 + u2 * (-1.0 / 6.0 + u2 * (1.0 / 120.0 +
                               u2 * (-1.0 / 5040.0 + u2 / 362880.0)))),
                          0.0);
            case 1:
                return cd(0.0, -(T * T / kPi) * u *
                                   (1.0 / 3.0 + u2 * (-1.0 / 30.0 + u2 * (1.0 / 840.0 +
                                    u2 * (-1.0 / 45360.0 + u2 / 3991680.0)))));
            default:
                return cd(T * T * T / kPi *
                              (1.0 / 3.0 + u2 * (-1.0 / 10.0 + u2 * (1.0 / 168.0 +
                               u2 * (-1.0 / 6480.0 + u2 / 443520.0)))),
                          0.0);
        }
    }
    const double s = std::sin(u), c = std::cos(u);
    switch (order) {
        case 0:
            return cd(s / (kPi * x), 0.0);
        case 1:
            return cd(0.0, -(s - u * c) / (kPi * x * x));
        default:
            return cd((T * T * s / x + 2.0 * T * c / (x * x) - 2.0 * s / (x * x * x)) / kPi,
                      0.0);
    }
}

MomentReport verify_moments(const SpectralKernel& k) {
    constexpr std::size_t kNodes = 10001;
    auto integrate = [&k](auto&& weight) {
        return simpson_fn([&](double t) { return weight(t) * k(t); }, -1.0, 1.0, kNodes);
    };

    MomentReport rep;
    switch (k.kind) {
        case KernelKind::V:
            rep.checks.push_back({"zeroth_moment", integrate([](double) { return 1.0; }), 0.0});
            rep.checks.push_back(
                {"curvature_moment", integrate([](double t) { return -0.5 * t * t; }), 1.0});
            break;
        case KernelKind::U:
            rep.checks.push_back({"zeroth_moment", integrate([](double) { return 1.0; }), -1.0});
            rep.checks.push_back(
                {"second_moment", integrate([](double t) { return t * t; }), 0.0});
            break;
        case KernelKind::W:
            rep.checks.push_back(
                {"first_moment", integrate([](double t) { return t; }), 1.0});
            break;
    }
    rep.max_residual = 0.0;
    for (const auto& chk : rep.checks)
        rep.max_residual = std::max(rep.max_residual, std::abs(chk.value - chk.target));
    rep.pass = rep.max_residual < 1e-10;
    return rep;
}

}  // namespace levyest
