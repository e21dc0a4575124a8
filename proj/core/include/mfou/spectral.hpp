#pragma once

#include <cstddef>
#include <vector>

#include "mfou/kernels.hpp"
#include "mfou/simulate.hpp"

namespace mfou {

struct SpectralConfig {
    int truncation_K = 200;
    bool tail_correction = true;
};

struct Periodogram {
    std::size_t n = 0;
    double delta = 0.0;
    std::vector<double> ordinates;  // I_n(2 pi j / n), j = 1 .. n/2

    double frequency(std::size_t i) const;  // lambda for ordinates[i]
};

// Spectral density of the sampled process on (-pi, pi], aliasing sum truncated
// at |k| <= K with optional Euler-Maclaurin tail.
double f_delta(double lambda, const ThetaParams& theta, double delta,
               const SpectralConfig& cfg = {});

// Rigorous bound on the part of the aliasing sum with |k| > K, valid for |lambda| <= pi.
double f_delta_tail_bound(double lambda, const ThetaParams& theta, double delta, int K);

// Fast evaluator of f_delta at fixed parameters: the smooth k != 0 part is
// replaced by a Chebyshev interpolant on [0, pi].
class SpectralDensity {
public:
    SpectralDensity(const ThetaParams& theta, double delta, const SpectralConfig& cfg = {});

    double operator()(double lambda) const;
    // with log|lambda| and cos(lambda) precomputed by the caller
    double eval(double lambda, double log_abs_lambda, double cos_lambda) const;

private:
    double aliased(double lambda) const;

    double H_;
    double alpha_;
    double delta_;
    double frac_scale_;  // a_H delta^{2H} / 2pi
    double d2_;          // (delta alpha)^2
    double ar_num_;
    double ar_phi_;
    std::vector<double> cheb_;
};

Periodogram periodogram(const SamplePath& path);

// all n ordinates j = 0..n-1 (including zero frequency), for Parseval checks
std::vector<double> periodogram_all(const SamplePath& path);

// Precomputes the frequency tables of a periodogram for repeated contrast evaluation.
class WhittleContrast {
public:
    WhittleContrast(const Periodogram& pg, const SpectralConfig& cfg = {});
    double operator()(const ThetaParams& theta) const;

private:
    std::size_t n_;
    double delta_;
    SpectralConfig cfg_;
    std::vector<double> ord_, lam_, loglam_, coslam_;
};

double whittle_contrast(const Periodogram& pg, const ThetaParams& theta,
                        const SpectralConfig& cfg = {});

}  // namespace mfou
