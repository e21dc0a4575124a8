#pragma once

#include <cstdint>

namespace mfou {

struct ThetaParams {
    double alpha = 1.0;
    double hurst = 0.85;

    ThetaParams() = default;
    // throws DomainError unless alpha > 0 and 3/4 < hurst < 1
    ThetaParams(double alpha_, double hurst_);

    static bool valid(double alpha, double hurst);
};

// digamma by upward recurrence into the asymptotic regime
double digamma(double x);

// Gamma(2H+1) sin(pi H), the constant in front of the spectral kernel
double spectral_constant_aH(double H);

// d/dH of spectral_constant_aH
double spectral_constant_aH_dH(double H);

// K_H(tau) = H(2H-1)|tau|^{2H-2}
double kernel_K(double tau, double H);

// Fourier transform of K_H: a_H |lambda|^{1-2H}
double kernel_hat_K(double lambda, double H);

// d/dH log(1 + hat K_H(lambda))
double dH_log_one_plus_hatK(double lambda, double H);

double fgn_autocov(std::int64_t k, double H, double delta);
double mixed_increment_autocov(std::int64_t k, double H, double delta);

// Kernel quantities at a fixed H with the constants computed once.
class FractionalKernel {
public:
    explicit FractionalKernel(double H);

    double hurst() const { return H_; }
    double aH() const { return aH_; }
    double aH_dH() const { return daH_; }

    double K(double tau) const;
    double hatK(double lambda) const;
    double dH_log_one_plus_hatK(double lambda) const;
    // same quantity as a function of L = log|lambda|, usable far outside double range of lambda
    double dH_log_one_plus_hatK_log(double L) const;

private:
    double H_;
    double aH_;
    double daH_;
    double c_;
};

}  // namespace mfou
