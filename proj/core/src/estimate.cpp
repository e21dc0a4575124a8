#include "mfou/estimate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mfou/errors.hpp"
#include "mfou/optimize.hpp"
#include "mfou/parallel.hpp"
#include "mfou/quadrature.hpp"

namespace mfou {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> breakpoints(double lo, double hi, double step) {
    std::vector<double> b{lo};
    double x = std::floor(lo / step) * step + step;
    for (; x < hi; x += step) b.push_back(x);
    b.push_back(hi);
    return b;
}

// integration window in L = log(lambda)
struct LogWindow {
    double lo, hi, tail;
};

LogWindow window(const FractionalKernel& k, double alpha) {
    const double la = std::log(alpha);
    LogWindow w;
    w.lo = std::min(-40.0, la - 40.0);
    // beyond tail, a_H lambda^{1-2H} <= 1e-4 and the i11 integrand has a convergent series
    w.tail = std::max(10.0, std::log(1e4 * k.aH()) / (2.0 * k.hurst() - 1.0));
    w.hi = std::max(w.tail, la) + 60.0;
    return w;
}

void check_tol(double tol) {
    if (!(tol > 0.0 && tol <= 1e-4)) throw DomainError("quadrature tolerance must lie in (0, 1e-4]");
}

}  // namespace

Mat2 FisherMatrix::inverse() const {
    const double det = i11 * i22 - i12 * i12;
    if (!(det > 0.0) || !(i11 > 0.0)) throw DegenerateInformation("Fisher matrix is not positive definite");
    return {i22 / det, -i12 / det, -i12 / det, i11 / det};
}

FisherMatrix fisher_information(const ThetaParams& theta, double tol) {
    check_tol(tol);
    const FractionalKernel kern(theta.hurst);
    const double a = kern.aH();
    const double ap = kern.aH_dH();
    const double p = ap / a;
    const double H = theta.hurst;
    const double alpha = theta.alpha;
    const LogWindow w = window(kern, alpha);
    const double rel = 1e-13;

    // i11 -----------------------------------------------------------------
    // below lo: d -> p - 2L, and int (p-2L)^2 e^L = e^L[(p-2L)^2 + 4(p-2L) + 8]
    const double q0 = p - 2.0 * w.lo;
    const double left11 = std::exp(w.lo) * (q0 * q0 + 4.0 * q0 + 8.0);

    auto f11 = [&](double L) {
        const double d = kern.dH_log_one_plus_hatK_log(L);
        return d * d * std::exp(L);
    };
    const auto r11 =
        integrate_gk_pieces<double>(f11, breakpoints(w.lo, w.tail, 5.0), 2.0 * kPi * tol, rel);

    // above tail: d^2 e^L = P(L) sum_k (k+1)(-a)^k exp(-q_k L), P = (a' - 2aL)^2,
    // q_k = (k+2)(2H-1) - 1 > 0
    const double U = w.tail;
    const double PU = (ap - 2.0 * a * U) * (ap - 2.0 * a * U);
    const double dPU = -4.0 * a * (ap - 2.0 * a * U);
    const double ddP = 8.0 * a * a;
    double right11 = 0.0;
    double coef = 1.0;
    for (int k = 0; k < 60; ++k) {
        const double q = (k + 2) * (2.0 * H - 1.0) - 1.0;
        const double J = std::exp(-q * U) * (PU / q + dPU / (q * q) + ddP / (q * q * q));
        const double term = (k + 1) * coef * J;
        right11 += term;
        if (std::abs(term) < 1e-17 * std::abs(right11)) break;
        coef *= -a;
    }
    const double i11 = (left11 + r11.value + right11) / (2.0 * kPi);
    const double err11 = r11.error / (2.0 * kPi);

    // i12 -----------------------------------------------------------------
    auto f12 = [&](double L) {
        const double el = std::exp(L);
        return kern.dH_log_one_plus_hatK_log(L) * el / (alpha * alpha + el * el);
    };
    const double left12 = std::exp(w.lo) * (q0 + 2.0) / (alpha * alpha);
    const auto r12 =
        integrate_gk_pieces<double>(f12, breakpoints(w.lo, w.hi, 5.0), kPi * tol / alpha, rel);
    const double i12 = alpha / kPi * (left12 + r12.value);
    const double err12 = alpha / kPi * r12.error;

    FisherMatrix F;
    F.i11 = i11;
    F.i12 = i12;
    F.i22 = 1.0 / (2.0 * alpha);
    F.theta = theta;
    F.quad_tol = std::max(err11, err12);
    if (!r11.converged || !(err11 <= tol))
        throw AccuracyError("i11 quadrature did not reach tolerance", i11, err11);
    if (!r12.converged || !(err12 <= tol))
        throw AccuracyError("i12 quadrature did not reach tolerance", i12, err12);
    return F;
}

double fisher_i12_complex_form(const ThetaParams& theta, double tol) {
    check_tol(tol);
    using C = std::complex<double>;
    const FractionalKernel kern(theta.hurst);
    const double alpha = theta.alpha;
    const LogWindow w = window(kern, alpha);
    const double p = kern.aH_dH() / kern.aH();
    const auto br = breakpoints(w.lo, w.hi, 5.0);

    // lambda = +e^L and lambda = -e^L; d is even so both use the same d(L)
    auto pos = [&](double L) {
        const double el = std::exp(L);
        return kern.dH_log_one_plus_hatK_log(L) * el / C(alpha, -el);
    };
    auto neg = [&](double L) {
        const double el = std::exp(L);
        return kern.dH_log_one_plus_hatK_log(L) * el / C(alpha, el);
    };
    const double scale = 1.0 / (2.0 * kPi);
    const auto rp = integrate_gk_pieces<C>(pos, br, 0.5 * tol / scale, 1e-13);
    const auto rn = integrate_gk_pieces<C>(neg, br, 0.5 * tol / scale, 1e-13);
    // below lo each half contributes e^L (p - 2L + 2) / alpha
    const double left = std::exp(w.lo) * (p - 2.0 * w.lo + 2.0) / alpha;
    const C total = rp.value + rn.value + 2.0 * left;
    if (!rp.converged || !rn.converged)
        throw AccuracyError("complex-form i12 quadrature did not converge", scale * total.real(),
                            scale * (rp.error + rn.error));
    return scale * total.real();
}

Mat2 local_scaling(double T, const FisherMatrix& fisher) {
    if (!(T > 0.0)) throw DomainError("horizon T must be positive");
    Eigen::Matrix2d I;
    I << fisher.i11, fisher.i12, fisher.i12, fisher.i22;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(I);
    const auto ev = es.eigenvalues();
    if (!(ev(0) > 0.0)) throw DegenerateInformation("Fisher matrix is not positive definite");
    const Eigen::Vector2d s(1.0 / std::sqrt(ev(0)), 1.0 / std::sqrt(ev(1)));
    const Eigen::Matrix2d root = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
    const Eigen::Matrix2d phi = root / std::sqrt(T);
    return {phi(0, 0), phi(0, 1), phi(1, 0), phi(1, 1)};
}

EstimationResult whittle_estimate(const SamplePath& path, const SpectralConfig& cfg,
                                  const ThetaParams& init, int opt_budget) {
    if (path.values.size() < 256) throw InsufficientData("Whittle estimation needs a path of length >= 256");
    bool constant = true;
    for (double v : path.values)
        if (v != path.values.front()) {
            constant = false;
            break;
        }
    if (constant) throw DegenerateData("path is constant");

    const WhittleContrast contrast(periodogram(path), cfg);
    const auto fit = minimize_over_domain([&](const ThetaParams& th) { return contrast(th); }, init,
                                          opt_budget);
    EstimationResult r;
    r.theta_hat = fit.theta;
    r.objective = fit.objective;
    r.iterations = fit.iterations;
    r.converged = fit.converged;
    const double T = path.horizon();
    try {
        const Mat2 inv = fisher_information(fit.theta, 1e-8).inverse();
        r.stderr_hurst = std::sqrt(inv[0] / T);
        r.stderr_alpha = std::sqrt(inv[3] / T);
    } catch (const Error&) {
        r.stderr_hurst = r.stderr_alpha = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

MonteCarloSummary run_monte_carlo(const ThetaParams& theta0, double delta, std::size_t n,
                                  std::size_t reps, std::uint64_t master_seed,
                                  const MonteCarloOptions& opt) {
    if (reps < 1) throw DomainError("reps must be >= 1");
    const CirculantSampler sampler(n, theta0.hurst, delta);
    std::vector<EstimationResult> est(reps);
    std::vector<char> ok(reps, 0);
    parallel_for(reps, opt.threads, [&](std::size_t i) {
        const auto inc = sampler.sample(derive_replication_seed(master_seed, i));
        const auto path = build_ou_path(inc, theta0.alpha);
        try {
            est[i] = whittle_estimate(path, opt.cfg, opt.init, opt.opt_budget);
            ok[i] = est[i].converged ? 1 : 0;
        } catch (const Error&) {
            ok[i] = 0;
        }
    });

    MonteCarloSummary s;
    s.reps = reps;
    s.master_seed = master_seed;
    s.theta0 = theta0;
    s.delta = delta;
    s.n = n;
    s.truncation_K = opt.cfg.truncation_K;
    std::vector<std::array<double, 2>> err;
    const double sqT = std::sqrt(double(n) * delta);
    double sa = 0.0, sh = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
        if (!ok[i]) {
            ++s.failures;
            continue;
        }
        sa += est[i].theta_hat.alpha;
        sh += est[i].theta_hat.hurst;
        err.push_back({sqT * (est[i].theta_hat.hurst - theta0.hurst),
                       sqT * (est[i].theta_hat.alpha - theta0.alpha)});
    }
    if (err.empty()) throw HarnessError("no replication converged");
    const double m = double(err.size());
    s.mean_alpha = sa / m;
    s.mean_hurst = sh / m;
    double e0 = 0.0, e1 = 0.0;
    for (const auto& e : err) {
        e0 += e[0];
        e1 += e[1];
    }
    e0 /= m;
    e1 /= m;
    double c00 = 0.0, c01 = 0.0, c11 = 0.0;
    for (const auto& e : err) {
        c00 += (e[0] - e0) * (e[0] - e0);
        c01 += (e[0] - e0) * (e[1] - e1);
        c11 += (e[1] - e1) * (e[1] - e1);
    }
    const double den = err.size() > 1 ? m - 1.0 : 1.0;
    s.sample_cov = {c00 / den, c01 / den, c01 / den, c11 / den};
    s.fisher_inverse = fisher_information(theta0, 1e-9).inverse();
    return s;
}

}  // namespace mfou
