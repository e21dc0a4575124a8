#include "mfou/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fft.hpp"
#include "mfou/errors.hpp"
#include "mfou/kernels.hpp"

namespace mfou {

namespace {

std::vector<double> raw_eigenvalues(std::size_t n, double H, double delta) {
    const std::size_t m = 2 * n;
    std::vector<double> row(m, 0.0);
    for (std::size_t k = 0; k <= n; ++k) row[k] = mixed_increment_autocov(std::int64_t(k), H, delta);
    for (std::size_t k = 1; k < n; ++k) row[m - k] = row[k];
    std::vector<std::complex<double>> spec = real_fft(row);
    std::vector<double> lam(m);
    for (std::size_t j = 0; j <= n; ++j) lam[j] = spec[j].real();
    for (std::size_t j = n + 1; j < m; ++j) lam[j] = lam[m - j];
    return lam;
}

double clamp_eigenvalues(std::vector<double>& lam) {
    const double mx = *std::max_element(lam.begin(), lam.end());
    const double mn = *std::min_element(lam.begin(), lam.end());
    if (mn < -1e-10 * mx)
        throw EmbeddingFailure("circulant embedding is not nonnegative: min eigenvalue " +
                                   std::to_string(mn),
                               mn);
    for (double& v : lam)
        if (v < 0.0) v = 0.0;
    return mn;
}

void check_args(std::size_t n, double H, double delta) {
    if (n < 1) throw DomainError("need at least one increment");
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (!(H >= 0.5 && H < 1.0)) throw DomainError("simulation requires hurst in [1/2, 1)");
}

}  // namespace

std::vector<double> embedding_eigenvalues(std::size_t n, double H, double delta) {
    check_args(n, H, delta);
    return raw_eigenvalues(n, H, delta);
}

std::vector<double> embedding_covariance(std::size_t n, double H, double delta) {
    check_args(n, H, delta);
    std::vector<double> lam = raw_eigenvalues(n, H, delta);
    clamp_eigenvalues(lam);
    const std::size_t m = lam.size();
    std::vector<double> lag(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            s += lam[j] * std::cos(2.0 * std::numbers::pi * double(j * k % m) / double(m));
        lag[k] = s / double(m);
    }
    std::vector<double> cov(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cov[i * n + j] = lag[i > j ? i - j : j - i];
    return cov;
}

CirculantSampler::CirculantSampler(std::size_t n, double H, double delta)
    : n_(n), H_(H), delta_(delta) {
    check_args(n, H, delta);
    std::vector<double> lam = raw_eigenvalues(n, H, delta);
    min_eig_ = clamp_eigenvalues(lam);
    scale_.resize(lam.size());
    const double m = double(lam.size());
    for (std::size_t j = 0; j < lam.size(); ++j) scale_[j] = std::sqrt(lam[j] / m);
}

MixedIncrements CirculantSampler::sample(std::uint64_t seed) const {
    const std::size_t m = scale_.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::complex<double>> w(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double a = normal(rng);
        const double b = normal(rng);
        w[j] = {scale_[j] * a, scale_[j] * b};
    }
    complex_fft_inplace(w);
    MixedIncrements out;
    out.delta = delta_;
    out.hurst = H_;
    out.seed = seed;
    out.values.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) out.values[k] = w[k].real();
    return out;
}

MixedIncrements simulate_mixed_increments(std::size_t n, double H, double delta,
                                          std::uint64_t seed) {
    return CirculantSampler(n, H, delta).sample(seed);
}

SamplePath build_ou_path(const MixedIncrements& inc, double alpha, int refine,
                         std::size_t burn_in) {
    if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
    if (refine < 1) throw DomainError("refine must be >= 1");
    const std::size_t r = std::size_t(refine);
    if (inc.values.empty() || inc.values.size() % r != 0)
        throw ShapeError("refine factor " + std::to_string(refine) +
                         " does not divide the increment count " +
                         std::to_string(inc.values.size()));
    const std::size_t n = inc.values.size() / r;
    if (burn_in > n) throw ShapeError("burn-in longer than the path");

    const double phi = std::exp(-alpha * inc.delta);
    std::vector<double> coarse(n + 1);
    double x = 0.0;
    coarse[0] = 0.0;
    for (std::size_t k = 0; k < inc.values.size(); ++k) {
        x = phi * x + inc.values[k];
        if ((k + 1) % r == 0) coarse[(k + 1) / r] = x;
    }
    SamplePath path;
    path.delta = inc.delta * double(r);
    path.values.assign(coarse.begin() + std::ptrdiff_t(burn_in), coarse.end());
    path.x0 = path.values.front();
    return path;
}

std::uint64_t derive_replication_seed(std::uint64_t master, std::uint64_t replication) {
    // splitmix64 finalizer over an odd-multiplier offset: injective in replication
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (replication + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace mfou
