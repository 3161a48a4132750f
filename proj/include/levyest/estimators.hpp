#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "levyest/ecf.hpp"
#include "levyest/kernels.hpp"
#include "levyest/model.hpp"

namespace levyest {

struct XGrid {
    double min = -10.0;
    double max = 10.0;
    std::size_t count = 1001;
};
std::vector<double> linspace(const XGrid& g);

struct EstimatorConfig {
    std::size_t n = 0;
    double eta = 0.0;   // in (0, Sigma^{-2})
    double h = 0.0;     // bandwidth (eta log n)^{-1/2}
    double m_n = 0.0;   // slow factor log log n
    double M_n = 0.0;   // clamp level m_n / h^2
    double beta = 1.0;
    std::size_t grid_size = 2049;
    XGrid x_grid;
    SpectralKernel v, u, w;
    double cutoff() const { return 1.0 / h; }
};

// Bandwidth/clamp schedule from the class bounds: eta = Sigma^{-2}/2,
// h = (eta log n)^{-1/2}, m_n = log log n, M_n = m_n / h^2. Requires n >= 16.
EstimatorConfig default_config(std::size_t n, const ClassParams& params);

struct EstimateFlags {
    bool zero_risk = false;
    bool zero_modulus = false;
    bool truncation_active_sigma = false;
    bool truncation_active_lambda = false;
    bool truncation_active_gamma = false;
};

struct TripletEstimate {
    double sigma2_hat = 0.0;
    double lambda_hat = 0.0;
    double gamma_hat = 0.0;
    EstimateFlags flags;
    // Largest relative half-grid Simpson deviation seen while integrating;
    // a cheap convergence probe, expected < 1e-6 on sane configs.
    double quadrature_residual = 0.0;
};

// Kernel-weighted integrals of the clamped log transform over the grid.
// grid.cutoff must equal 1/config.h.
double estimate_sigma2(const EcfGrid& grid, const EstimatorConfig& cfg,
                       bool* truncation_active = nullptr);
double estimate_lambda(const EcfGrid& grid, const EstimatorConfig& cfg,
                       bool* truncation_active = nullptr);
double estimate_gamma(const EcfGrid& grid, const EstimatorConfig& cfg,
                      bool* truncation_active = nullptr);
TripletEstimate estimate_triplet(const EcfGrid& grid, const EstimatorConfig& cfg);

struct DensityEstimate {
    std::vector<double> x;
    std::vector<double> rho_hat;
    double imag_residual = 0.0;       // largest dropped imaginary part
    double quadrature_residual = 0.0;
    EstimatorConfig config;
};

// Jump density estimate by Fourier inversion over [-1/h, 1/h]: three closed
// form terms (drift, mass, curvature) plus quadrature of the clamped log
// modulus and argument.
DensityEstimate estimate_rho(const TripletEstimate& est, const EcfGrid& grid,
                             const EstimatorConfig& cfg);

// The clamped spectral integrand the inversion integrates, tabulated on the
// grid: -i g t + lam + s2 t^2/2 + clamp(log_modulus) + i clamp(arg).
std::vector<std::complex<double>> rho_spectral_values(const TripletEstimate& est,
                                                      const EcfGrid& grid,
                                                      const EstimatorConfig& cfg);

// Grid filled from the exact transform of a known triplet (no sampling):
// values, exact log modulus and exact continuous argument.
EcfGrid oracle_grid(const LevyTriplet& tr, const EstimatorConfig& cfg);

}  // namespace levyest
