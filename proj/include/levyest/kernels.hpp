#pragma once

#include <complex>
#include <string>
#include <vector>

namespace levyest {

enum class KernelKind { V, U, W };

struct KernelTerm {
    int exponent;
    double coefficient;
};

// Polynomial spectral weight supported on [-1, 1], identically zero outside.
// Kind V carries even exponents and moment conditions (0, curvature),
// kind U even exponents (mass -1, second moment 0), kind W odd exponents
// (first moment 1). The minimal exponent is always >= beta.
struct SpectralKernel {
    KernelKind kind = KernelKind::V;
    double beta = 1.0;
    std::vector<KernelTerm> terms;

    double operator()(double t) const;
    // Bandwidth-scaled version: V -> h^3 k(h t), U -> h k(h t), W -> h^2 k(h t).
    double scaled(double h, double t) const;
};

int scale_power(KernelKind kind);
std::string kind_name(KernelKind kind);

// Two-term closed forms solving the moment systems; beta > 0 required.
SpectralKernel build_kernel_v(double beta);
SpectralKernel build_kernel_u(double beta);
SpectralKernel build_kernel_w(double beta);

// (1/2pi) int_{-T}^{T} e^{-i t x} t^order dt for order in {0, 1, 2}.
// Closed form; the removable singularity at x = 0 is handled by a truncated
// series once |x T| < 0.1 (the trig forms cancel badly below that).
std::complex<double> dirichlet_term(int order, double x, double T);

struct MomentCheck {
    std::string name;
    double value;
    double target;
};
struct MomentReport {
    std::vector<MomentCheck> checks;
    double max_residual = 0.0;
    bool pass = false;  // all |value - target| < 1e-10
};
// Re-integrates the defining moments with a dense Simpson rule (10001 nodes).
MomentReport verify_moments(const SpectralKernel& k);

}  // namespace levyest
