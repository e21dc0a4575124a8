#include "mfou/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfou/errors.hpp"
#include "mfou/kernels.hpp"
#include "mfou/quadrature.hpp"

namespace mfou {

namespace {
constexpr double kPi = std::numbers::pi;
using C = std::complex<double>;
}  // namespace

AnalyticFactorization::AnalyticFactorization(double H, double quad_tol, double tail_cut)
    : H_(H), tol_(quad_tol), tail_cut_(tail_cut) {
    if (!(H > 0.75 && H < 1.0)) throw DomainError("analytic factorization requires hurst in (3/4, 1)");
    if (!(quad_tol > 0.0)) throw DomainError("quad_tol must be positive");
    if (!(tail_cut >= 1e3)) throw DomainError("tail_cut must be at least 1e3");
    aH_ = spectral_constant_aH(H);
}

C AnalyticFactorization::lambda_z(C z) const {
    if (z.imag() == 0.0) throw DomainError("lambda_z: z on the real axis, use lambda_boundary");
    const double e = 1.0 - 2.0 * H_;
    return 1.0 + 0.5 * std::tgamma(2.0 * H_ + 1.0) * (std::pow(z, e) + std::pow(-z, e));
}

C AnalyticFactorization::lambda_boundary(double tau, BoundarySide side) const {
    if (tau == 0.0) throw SingularArgument("lambda_boundary: tau = 0");
    const double ph = (H_ - 0.5) * kPi * (side == BoundarySide::plus ? 1.0 : -1.0) * (tau > 0 ? 1.0 : -1.0);
    return 1.0 + aH_ * std::pow(std::abs(tau), 1.0 - 2.0 * H_) * std::polar(1.0, ph);
}

double AnalyticFactorization::arg_alpha(double tau) const {
    if (tau == 0.0) throw SingularArgument("arg_alpha: tau = 0");
    const double ph = (H_ - 0.5) * kPi;
    const double v =
        std::atan(aH_ * std::sin(ph) / (std::pow(std::abs(tau), 2.0 * H_ - 1.0) + aH_ * std::cos(ph)));
    return tau > 0.0 ? v : -v;
}

C AnalyticFactorization::log_yc(C z) const {
    const double r = std::abs(z);
    // distance from the positive half-line
    const double dist = z.real() > 0.0 ? std::abs(z.imag()) : r;
    if (!(dist > 1e-8)) throw DomainError("yc: z within 1e-8 of the positive real axis");

    const double ph = (H_ - 0.5) * kPi;
    const double alpha0 = ph;  // alpha(0+)
    const double T = tail_cut_ * std::max(1.0, r);
    const double tau_lo = 1e-20 * std::min(1.0, r);

    // [0, tau_lo]: alpha ~ alpha(0+), int_0^{tau_lo} dtau / (tau - z) = log(1 - tau_lo / z)
    const C small = alpha0 * std::log(1.0 - tau_lo / z);

    // [tau_lo, T] in u = log tau, split near log|z|
    auto f = [&](double u) {
        const double tau = std::exp(u);
        return C(arg_alpha(tau) * tau) / (tau - z);
    };
    const double ulo = std::log(tau_lo), uhi = std::log(T), uz = std::log(r);
    std::vector<double> br{ulo};
    for (double u = std::ceil(ulo / 4.0) * 4.0; u < uhi; u += 4.0)
        if (std::abs(u - uz) > 0.5) br.push_back(u);
    if (uz > ulo && uz < uhi) br.push_back(uz);
    br.push_back(uhi);
    std::sort(br.begin(), br.end());
    const auto mid = integrate_gk_pieces<C>(f, br, tol_ * kPi, 1e-14, 4000);
    if (!mid.converged)
        throw AccuracyError("Y_c quadrature did not reach tolerance", std::abs(mid.value), mid.error / kPi);

    // [T, inf): alpha(tau) = sum_k (-1)^{k+1} (a x)^k sin(k ph) / k with x = tau^{1-2H},
    // 1/(tau - z) = sum_m z^m tau^{-1-m}; each term integrates to T^{-p}/p
    C tail = 0.0;
    for (int k = 1; k <= 12; ++k) {
        const double ck = ((k % 2) ? 1.0 : -1.0) * std::pow(aH_, k) * std::sin(k * ph) / k;
        C zm = 1.0;
        for (int m = 0; m <= 8; ++m) {
            const double p = k * (2.0 * H_ - 1.0) + m;
            tail += ck * zm * std::pow(T, -p) / p;
            zm *= z;
        }
    }
    return (small + mid.value + tail) / kPi;
}

FactorizationReport AnalyticFactorization::verify_factorization(const std::vector<C>& points) const {
    FactorizationReport rep;
    rep.hurst = H_;
    for (const C& z : points) {
        if (z.imag() == 0.0) throw DomainError("verify_factorization: test point on the real axis");
        const C prod = std::exp(log_yc(z) + log_yc(-z));
        const C lam = lambda_z(z);
        const double res = std::abs(prod - lam) / std::abs(lam);
        rep.points.push_back(z);
        rep.residuals.push_back(res);
        rep.max_residual = std::max(rep.max_residual, res);
    }
    return rep;
}

std::vector<C> factorization_grid() {
    std::vector<C> pts;
    for (double r : {0.1, 1.0, 10.0, 100.0})
        for (double phi : {kPi / 4, kPi / 2, 3 * kPi / 4, -kPi / 4, -kPi / 2}) pts.push_back(std::polar(r, phi));
    return pts;
}

}  // namespace mfou
