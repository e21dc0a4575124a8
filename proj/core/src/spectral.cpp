#include "mfou/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "mfou/errors.hpp"

namespace mfou {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kChebNodes = 32;

double reduce_frequency(double lambda) {
    if (!std::isfinite(lambda)) throw DomainError("frequency must be finite");
    double r = std::remainder(lambda, kTwoPi);  // in [-pi, pi]
    if (r == -kPi) r = kPi;
    if (r == 0.0) throw SingularArgument("f_delta: frequency is 0 mod 2pi");
    return r;
}

struct AliasTerms {
    double H, d2;

    double term(double y) const {
        const double ay = std::abs(y);
        return std::pow(ay, 1.0 - 2.0 * H) / (d2 + ay * ay);
    }

    // sum_{k > K} term(mu + 2 pi k), by Euler-Maclaurin about the cell midpoints
    double tail(double mu, int K) const {
        const double Y = mu + kTwoPi * (K + 0.5);
        const double h2 = 2.0 * H;
        double integral = 0.0;
        double c = 1.0;
        const double r = d2 / (Y * Y);
        for (int j = 0; j < 4; ++j) {
            integral += c * std::pow(Y, -h2) / (h2 + 2.0 * j);
            c *= -r;
        }
        integral /= kTwoPi;
        const double q = d2 + Y * Y;
        const double dfdx =
            kTwoPi * ((1.0 - h2) * std::pow(Y, -h2) / q - 2.0 * std::pow(Y, 2.0 - h2) / (q * q));
        return integral + dfdx / 24.0;
    }

    double both_sides(double lambda, int K, bool tail_correction) const {
        double s = 0.0;
        for (int k = K; k >= 1; --k) s += term(lambda + kTwoPi * k) + term(lambda - kTwoPi * k);
        if (tail_correction) s += tail(lambda, K) + tail(-lambda, K);
        return s;
    }
};

double ar_term(double lambda, double alpha, double delta) {
    const double phi = std::exp(-alpha * delta);
    const double num = -std::expm1(-2.0 * alpha * delta);
    return num / (kTwoPi * 2.0 * alpha * (1.0 + phi * phi - 2.0 * phi * std::cos(lambda)));
}

void check_config(const SpectralConfig& cfg) {
    if (cfg.truncation_K < 1) throw DomainError("truncation_K must be >= 1");
}

}  // namespace

double Periodogram::frequency(std::size_t i) const {
    return kTwoPi * double(i + 1) / double(n);
}

double f_delta(double lambda, const ThetaParams& theta, double delta, const SpectralConfig& cfg) {
    check_config(cfg);
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    const double lam = reduce_frequency(lambda);
    const double H = theta.hurst;
    const AliasTerms at{H, (delta * theta.alpha) * (delta * theta.alpha)};
    const double scale = spectral_constant_aH(H) * std::pow(delta, 2.0 * H) / kTwoPi;
    const double frac = at.term(lam) + at.both_sides(lam, cfg.truncation_K, cfg.tail_correction);
    return scale * frac + ar_term(lam, theta.alpha, delta);
}

double f_delta_tail_bound(double lambda, const ThetaParams& theta, double delta, int K) {
    (void)lambda;
    if (K < 1) throw DomainError("K must be >= 1");
    const double H = theta.hurst;
    const double scale = spectral_constant_aH(H) * std::pow(delta, 2.0 * H) / kTwoPi;
    // each side: sum_{k>K} (2 pi (k - 1/2))^{-1-2H} <= (2 pi)^{-1-2H} K^{-2H} / 2H by convexity;
    // doubled for the two sides and doubled again as margin
    return 4.0 * scale * std::pow(kTwoPi, -1.0 - 2.0 * H) * std::pow(double(K), -2.0 * H) /
           (2.0 * H);
}

SpectralDensity::SpectralDensity(const ThetaParams& theta, double delta, const SpectralConfig& cfg)
    : H_(theta.hurst), alpha_(theta.alpha), delta_(delta) {
    check_config(cfg);
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    frac_scale_ = spectral_constant_aH(H_) * std::pow(delta, 2.0 * H_) / kTwoPi;
    d2_ = (delta * alpha_) * (delta * alpha_);
    ar_phi_ = std::exp(-alpha_ * delta);
    ar_num_ = -std::expm1(-2.0 * alpha_ * delta) / (kTwoPi * 2.0 * alpha_);

    const AliasTerms at{H_, d2_};
    std::vector<double> vals(kChebNodes);
    for (int i = 0; i < kChebNodes; ++i) {
        const double x = std::cos(kPi * (i + 0.5) / kChebNodes);
        vals[i] = at.both_sides(0.5 * kPi * (x + 1.0), cfg.truncation_K, cfg.tail_correction);
    }
    cheb_.assign(kChebNodes, 0.0);
    for (int k = 0; k < kChebNodes; ++k) {
        double s = 0.0;
        for (int i = 0; i < kChebNodes; ++i) s += vals[i] * std::cos(kPi * k * (i + 0.5) / kChebNodes);
        cheb_[k] = 2.0 * s / kChebNodes;
    }
}

double SpectralDensity::aliased(double lambda) const {
    const double x = 2.0 * std::abs(lambda) / kPi - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (int k = kChebNodes - 1; k >= 1; --k) {
        const double b0 = 2.0 * x * b1 - b2 + cheb_[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + 0.5 * cheb_[0];
}

double SpectralDensity::eval(double lambda, double log_abs_lambda, double cos_lambda) const {
    const double k0 = std::exp((1.0 - 2.0 * H_) * log_abs_lambda) / (d2_ + lambda * lambda);
    const double ar = ar_num_ / (1.0 + ar_phi_ * ar_phi_ - 2.0 * ar_phi_ * cos_lambda);
    return frac_scale_ * (k0 + aliased(lambda)) + ar;
}

double SpectralDensity::operator()(double lambda) const {
    const double lam = reduce_frequency(lambda);
    return eval(lam, std::log(std::abs(lam)), std::cos(lam));
}

Periodogram periodogram(const SamplePath& path) {
    if (path.values.size() < 9) throw InsufficientData("periodogram needs at least 8 observations");
    const std::size_t n = path.values.size() - 1;
    std::vector<double> x(path.values.begin() + 1, path.values.end());
    const auto X = real_fft(x);
    Periodogram pg;
    pg.n = n;
    pg.delta = path.delta;
    pg.ordinates.resize(n / 2);
    const double norm = 1.0 / (kTwoPi * double(n));
    for (std::size_t j = 1; j <= n / 2; ++j) pg.ordinates[j - 1] = std::norm(X[j]) * norm;
    return pg;
}

std::vector<double> periodogram_all(const SamplePath& path) {
    if (path.values.size() < 9) throw InsufficientData("periodogram needs at least 8 observations");
    const std::size_t n = path.values.size() - 1;
    std::vector<double> x(path.values.begin() + 1, path.values.end());
    const auto X = real_fft(x);
    std::vector<double> out(n);
    const double norm = 1.0 / (kTwoPi * double(n));
    for (std::size_t j = 0; j <= n / 2; ++j) out[j] = std::norm(X[j]) * norm;
    for (std::size_t j = n / 2 + 1; j < n; ++j) out[j] = out[n - j];
    return out;
}

WhittleContrast::WhittleContrast(const Periodogram& pg, const SpectralConfig& cfg)
    : n_(pg.n), delta_(pg.delta), cfg_(cfg), ord_(pg.ordinates) {
    check_config(cfg);
    const std::size_t m = ord_.size();
    lam_.resize(m);
    loglam_.resize(m);
    coslam_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        lam_[i] = pg.frequency(i);
        loglam_[i] = std::log(lam_[i]);
        coslam_[i] = std::cos(lam_[i]);
    }
}

double WhittleContrast::operator()(const ThetaParams& theta) const {
    const SpectralDensity f(theta, delta_, cfg_);
    double s = 0.0;
    for (std::size_t i = 0; i < ord_.size(); ++i) {
        const double fj = f.eval(lam_[i], loglam_[i], coslam_[i]);
        s += std::log(fj) + ord_[i] / fj;
    }
    return s / double(n_);
}

double whittle_contrast(const Periodogram& pg, const ThetaParams& theta, const SpectralConfig& cfg) {
    return WhittleContrast(pg, cfg)(theta);
}

}  // namespace mfou
