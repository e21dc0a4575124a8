#include "mfou/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mfou/errors.hpp"

namespace mfou {

namespace {

constexpr double kPi = std::numbers::pi;

void require_hurst(double H, double lo, double hi, const char* where) {
    if (!(H > lo && H < hi))
        throw DomainError(std::string(where) + ": hurst " + std::to_string(H) + " outside (" +
                          std::to_string(lo) + ", " + std::to_string(hi) + ")");
}

}  // namespace

ThetaParams::ThetaParams(double alpha_, double hurst_) : alpha(alpha_), hurst(hurst_) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("alpha must be positive, got " + std::to_string(alpha));
    require_hurst(hurst, 0.75, 1.0, "ThetaParams");
}

bool ThetaParams::valid(double alpha, double hurst) {
    return alpha > 0.0 && std::isfinite(alpha) && hurst > 0.75 && hurst < 1.0;
}

double digamma(double x) {
    if (std::isnan(x)) return x;
    if (x <= 0.0 && x == std::floor(x)) throw SingularArgument("digamma pole at non-positive integer");
    if (x < 0.0) return digamma(1.0 - x) - kPi / std::tan(kPi * x);

    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Bernoulli tail: B_{2k}/(2k x^{2k})
    const double series =
        r * (1.0 / 12 -
             r * (1.0 / 120 -
                  r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double spectral_constant_aH(double H) {
    require_hurst(H, 0.0, 1.0, "spectral_constant_aH");
    return std::tgamma(2.0 * H + 1.0) * std::sin(kPi * H);
}

double spectral_constant_aH_dH(double H) {
    require_hurst(H, 0.0, 1.0, "spectral_constant_aH_dH");
    const double g = std::tgamma(2.0 * H + 1.0);
    return g * (2.0 * digamma(2.0 * H + 1.0) * std::sin(kPi * H) + kPi * std::cos(kPi * H));
}

double kernel_K(double tau, double H) {
    if (tau == 0.0) throw SingularArgument("kernel_K: tau = 0");
    return H * (2.0 * H - 1.0) * std::pow(std::abs(tau), 2.0 * H - 2.0);
}

double kernel_hat_K(double lambda, double H) {
    if (lambda == 0.0) throw SingularArgument("kernel_hat_K: lambda = 0");
    return spectral_constant_aH(H) * std::pow(std::abs(lambda), 1.0 - 2.0 * H);
}

double dH_log_one_plus_hatK(double lambda, double H) {
    return FractionalKernel(H).dH_log_one_plus_hatK(lambda);
}

double fgn_autocov(std::int64_t k, double H, double delta) {
    if (!(delta > 0.0)) throw DomainError("fgn_autocov: delta must be positive");
    if (k < 0) k = -k;
    const double scale = std::pow(delta, 2.0 * H);
    if (k == 0) return scale;
    const double h2 = 2.0 * H;
    const double kk = static_cast<double>(k);
    if (k < 64) {
        return scale * 0.5 *
               (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(kk - 1.0, h2));
    }
    // second difference of k^{2H} expanded in 1/k to avoid cancellation:
    // k^{2H} sum_{j>=1} binom(2H, 2j) k^{-2j}
    const double r = 1.0 / (kk * kk);
    double coef = h2 * (h2 - 1.0) / 2.0;
    double rp = r;
    double sum = 0.0;
    for (int j = 1; j <= 8; ++j) {
        sum += coef * rp;
        coef *= (h2 - 2.0 * j) * (h2 - 2.0 * j - 1.0) / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
        rp *= r;
    }
    return scale * std::pow(kk, h2) * sum;
}

double mixed_increment_autocov(std::int64_t k, double H, double delta) {
    return fgn_autocov(k, H, delta) + (k == 0 ? delta : 0.0);
}

FractionalKernel::FractionalKernel(double H)
    : H_(H), aH_(spectral_constant_aH(H)), daH_(spectral_constant_aH_dH(H)),
      c_(H * (2.0 * H - 1.0)) {}

double FractionalKernel::K(double tau) const {
    if (tau == 0.0) throw SingularArgument("kernel_K: tau = 0");
    return c_ * std::pow(std::abs(tau), 2.0 * H_ - 2.0);
}

double FractionalKernel::hatK(double lambda) const {
    if (lambda == 0.0) throw SingularArgument("kernel_hat_K: lambda = 0");
    return aH_ * std::pow(std::abs(lambda), 1.0 - 2.0 * H_);
}

double FractionalKernel::dH_log_one_plus_hatK(double lambda) const {
    if (lambda == 0.0) throw SingularArgument("dH_log_one_plus_hatK: lambda = 0");
    return dH_log_one_plus_hatK_log(std::log(std::abs(lambda)));
}

double FractionalKernel::dH_log_one_plus_hatK_log(double L) const {
    const double e = (1.0 - 2.0 * H_) * L;
    // x / (1 + a x) with x = e^e, written to stay finite when x overflows
    const double r = e > 0.0 ? 1.0 / (std::exp(-e) + aH_) : std::exp(e) / (1.0 + aH_ * std::exp(e));
    return (daH_ - 2.0 * aH_ * L) * r;
}

}  // namespace mfou
