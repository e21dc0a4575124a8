#pragma once

#include <complex>
#include <vector>

namespace mfou {

enum class BoundarySide { plus, minus };

struct FactorizationReport {
    double hurst = 0.0;
    std::vector<std::complex<double>> points;
    std::vector<double> residuals;  // |Y_c(z) Y_c(-z) - Lambda(z)| / |Lambda(z)|
    double max_residual = 0.0;
};

// Lambda(z) = 1 + Gamma(2H+1)/2 (z^{1-2H} + (-z)^{1-2H}), its boundary values on the
// real axis, their argument alpha(tau), and the Cauchy-integral factor
// Y_c(z) = exp((1/pi) int_0^inf alpha(tau) / (tau - z) dtau).
class AnalyticFactorization {
public:
    explicit AnalyticFactorization(double H, double quad_tol = 1e-10, double tail_cut = 1e6);

    double hurst() const { return H_; }

    std::complex<double> lambda_z(std::complex<double> z) const;
    std::complex<double> lambda_boundary(double tau, BoundarySide side) const;
    double arg_alpha(double tau) const;
    // log Y_c(z); throws AccuracyError if the quadrature misses quad_tol
    std::complex<double> log_yc(std::complex<double> z) const;
    std::complex<double> yc(std::complex<double> z) const { return std::exp(log_yc(z)); }

    FactorizationReport verify_factorization(const std::vector<std::complex<double>>& points) const;

private:
    double H_;
    double aH_;
    double tol_;
    double tail_cut_;
};

// 20 off-axis points r e^{i phi}, r in {0.1, 1, 10, 100}, phi in {pi/4, pi/2, 3pi/4, -pi/4, -pi/2}
std::vector<std::complex<double>> factorization_grid();

}  // namespace mfou
