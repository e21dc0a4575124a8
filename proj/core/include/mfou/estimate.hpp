#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "mfou/kernels.hpp"
#include "mfou/simulate.hpp"
#include "mfou/spectral.hpp"

namespace mfou {

using Mat2 = std::array<double, 4>;  // row-major, index order (H, alpha)

struct FisherMatrix {
    double i11 = 0.0;  // H, H
    double i12 = 0.0;  // H, alpha
    double i22 = 0.0;  // alpha, alpha
    ThetaParams theta;
    double quad_tol = 0.0;  // achieved error bound, max over entries

    Mat2 matrix() const { return {i11, i12, i12, i22}; }
    Mat2 inverse() const;
};

struct EstimationResult {
    ThetaParams theta_hat;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double stderr_alpha = 0.0;
    double stderr_hurst = 0.0;
};

struct MonteCarloSummary {
    std::size_t reps = 0;
    double mean_alpha = 0.0;
    double mean_hurst = 0.0;
    Mat2 sample_cov{};       // of sqrt(T)(theta_hat - theta0), order (H, alpha)
    Mat2 fisher_inverse{};
    std::size_t failures = 0;
    std::uint64_t master_seed = 0;
    ThetaParams theta0;
    double delta = 0.0;
    std::size_t n = 0;
    int truncation_K = 0;
};

// I(theta): i11 = (1/4pi) int (d_H log(1+hatK))^2, i12 = (alpha/2pi) int d_H log(1+hatK)/(alpha^2+lambda^2),
// i22 = 1/(2 alpha). Throws AccuracyError if tol is not reached.
FisherMatrix fisher_information(const ThetaParams& theta, double tol = 1e-9);

// i12 from (1/2pi) Re int_R d_H log(1+hatK(lambda)) / (alpha - i lambda), both half-lines integrated
double fisher_i12_complex_form(const ThetaParams& theta, double tol = 1e-9);

// phi(T) = T^{-1/2} I^{-1/2}, symmetric square root
Mat2 local_scaling(double T, const FisherMatrix& fisher);

EstimationResult whittle_estimate(const SamplePath& path, const SpectralConfig& cfg = {},
                                  const ThetaParams& init = ThetaParams(1.0, 0.85),
                                  int opt_budget = 500);

struct MonteCarloOptions {
    SpectralConfig cfg;
    ThetaParams init = ThetaParams(1.0, 0.85);
    int opt_budget = 500;
    int threads = 1;
};

MonteCarloSummary run_monte_carlo(const ThetaParams& theta0, double delta, std::size_t n,
                                  std::size_t reps, std::uint64_t master_seed,
                                  const MonteCarloOptions& opt = {});

}  // namespace mfou
