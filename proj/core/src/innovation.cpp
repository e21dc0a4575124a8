#include "mfou/innovation.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>

#include "mfou/errors.hpp"
#include "mfou/optimize.hpp"
#include "mfou/parallel.hpp"

namespace mfou {

namespace {

NystromSolution solve_impl(const PowerKernel& kernel, double t, int m, double tol) {
    if (!(t > 0.0)) throw DomainError("horizon t must be positive");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const bool frac = kernel.is_fractional();
    const UnitFredholm uf(kernel, m, frac);
    double rcond = 0.0;
    const auto c = uf.solve(t, frac, &rcond);

    NystromSolution sol;
    sol.horizon_t = t;
    sol.hurst = kernel.hurst;
    sol.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (sol.condition > 1e12)
        throw ConditioningError("Nystrom system is ill-conditioned (condition estimate " +
                                    std::to_string(sol.condition) + ")",
                                sol.condition);

    const double be = kernel.beta;
    const double tb = std::pow(t, be);
    const double lt = std::log(t);
    const auto& x = uf.mesh();
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double xi = x[i];
        const double G = kernel.coef * std::pow(xi, be) - uf.phi(xi, c);
        const double g = tb * G;
        sol.nodes.push_back(t * xi);
        sol.g_values.push_back(g);
        if (frac) {
            const double H = kernel.hurst;
            const double dk = ((4.0 * H - 1.0) + 2.0 * kernel.coef * std::log(xi)) * std::pow(xi, be);
            sol.dH_values.push_back(2.0 * lt * g + tb * (dk - uf.dphi(xi, c)));
        } else {
            sol.dH_values.push_back(0.0);
        }
    }
    double rs = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = x[i + 1] - x[i];
        for (double f : {1.0 / 3.0, 2.0 / 3.0}) rs = std::max(rs, std::abs(uf.residual(x[i] + f * h, t, c)));
    }
    sol.residual_sup = tb * rs;
    if (!(sol.residual_sup <= tol))
        throw AccuracyError("Nystrom residual " + std::to_string(sol.residual_sup) +
                                " exceeds tolerance; increase m",
                            sol.residual_sup, sol.residual_sup);
    return sol;
}

void check_grid(std::size_t steps, double delta, const InnovationKernel& kernel) {
    if (steps > kernel.steps())
        throw ShapeError("kernel covers " + std::to_string(kernel.steps()) + " steps, path has " +
                         std::to_string(steps));
    if (std::abs(delta - kernel.delta()) > 1e-12 * kernel.delta())
        throw ShapeError("path step " + std::to_string(delta) + " differs from kernel step " +
                         std::to_string(kernel.delta()));
}

}  // namespace

NystromSolution solve_g(double t, double H, int m, double tol) {
    return solve_impl(PowerKernel::fractional(H), t, m, tol);
}

NystromSolution solve_g_kernel(const PowerKernel& kernel, double t, int m, double tol) {
    return solve_impl(kernel, t, m, tol);
}

InnovationKernel::InnovationKernel(double H, double delta, std::size_t n, int m, bool with_dH)
    : H_(H), delta_(delta), n_(n), with_dH_(with_dH) {
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (n < 1) throw DomainError("need at least one step");
    UnitFredholm uf(PowerKernel::fractional(H), m, with_dH);
    uf.prepare_fast();
    const auto pw = uf.uniform_powers(n);
    const double b1 = 2.0 * H - 1.0;

    w_.resize(n * (n + 1) / 2);
    if (with_dH) dw_.resize(w_.size());
    std::vector<UnitFredholm::CellIntegral> cells;
    for (std::size_t k = 1; k <= n; ++k) {
        const double t = double(k) * delta;
        const auto c = uf.solve_fast(t, with_dH);
        uf.uniform_cell_integrals(k, pw, c, with_dH, cells);
        // lag cell l = k - j + 1 of width delta; g(t, u) = t^beta G(u/t), du = t dx
        const double scale = std::pow(t, b1) / delta;
        const double dscale = 2.0 * std::log(t) * scale;
        const std::size_t off = offset(k);
        for (std::size_t j = 1; j <= k; ++j) {
            const auto& ci = cells[k - j];
            w_[off + j - 1] = scale * ci.g;
            if (with_dH) dw_[off + j - 1] = dscale * ci.g + scale * ci.dg;
        }
    }
}

InnovationKernel InnovationKernel::zero(double delta, std::size_t n) {
    InnovationKernel k;
    k.H_ = std::numeric_limits<double>::quiet_NaN();
    k.delta_ = delta;
    k.n_ = n;
    k.with_dH_ = true;
    k.w_.assign(n * (n + 1) / 2, 0.0);
    k.dw_.assign(n * (n + 1) / 2, 0.0);
    return k;
}

InnovationProcess innovation_drift(const SamplePath& path, const ThetaParams& theta,
                                   const InnovationKernel& kernel) {
    if (path.values.empty()) throw ShapeError("empty path");
    const std::size_t n = path.values.size() - 1;
    check_grid(n, path.delta, kernel);
    if (!std::isnan(kernel.hurst()) && kernel.hurst() != theta.hurst)
        throw ShapeError("kernel was built for a different hurst value");
    const auto& X = path.values;
    const double a = theta.alpha, dt = path.delta;

    // z_j = dX_j + alpha X_{j-1} dt and y_j = X_{j-1} dt, j = 1..n
    std::vector<double> z(n + 1, 0.0), y(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        z[j] = X[j] - X[j - 1] + a * X[j - 1] * dt;
        y[j] = X[j - 1] * dt;
    }
    InnovationProcess out;
    out.delta = dt;
    out.b_values.resize(n + 1);
    out.grad_b.resize(n + 1);
    out.b_values[0] = -a * X[0];
    out.grad_b[0] = {0.0, -X[0]};
    for (std::size_t k = 1; k <= n; ++k) {
        double sz = 0.0, sy = 0.0, sd = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            const double w = kernel.weight(k, j);
            sz += w * z[j];
            sy += w * y[j];
        }
        if (kernel.has_dH())
            for (std::size_t j = 1; j <= k; ++j) sd += kernel.dweight(k, j) * z[j];
        out.b_values[k] = -a * X[k] + sz;
        out.grad_b[k] = {sd, -X[k] + sy};
    }
    return out;
}

InnovationProcess reconstruct_innovation(const MixedIncrements& M, const InnovationKernel& kernel) {
    const std::size_t n = M.values.size();
    check_grid(n, M.delta, kernel);
    const double dt = M.delta;
    InnovationProcess out;
    out.delta = dt;
    out.bbar_values.assign(n + 1, 0.0);
    double m_level = 0.0, drift = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        // rho at the left point t_{k-1}
        double rho = 0.0;
        for (std::size_t i = 1; i + 1 <= k; ++i) rho += kernel.weight(k - 1, i) * M.values[i - 1];
        drift += rho * dt;
        m_level += M.values[k - 1];
        out.bbar_values[k] = m_level - drift;
    }
    return out;
}

double girsanov_loglik(const SamplePath& path, const ThetaParams& theta,
                       const InnovationKernel& kernel) {
    const auto ip = innovation_drift(path, theta, kernel);
    const auto& X = path.values;
    double s = 0.0, q = 0.0;
    for (std::size_t k = 0; k + 1 < X.size(); ++k) {
        const double b = ip.b_values[k];
        s += b * (X[k + 1] - X[k]);
        q += b * b;
    }
    return s - 0.5 * q * path.delta;
}

EstimationResult mle_continuous(const SamplePath& path, const ThetaParams& init, int budget,
                                const MleOptions& opt) {
    if (path.values.size() < 2) throw InsufficientData("path too short");
    const std::size_t n = path.values.size() - 1;
    if (n > opt.max_steps)
        throw DomainError("path has " + std::to_string(n) + " steps; the continuous-record MLE is limited to " +
                          std::to_string(opt.max_steps) + " (use Whittle estimation instead)");
    std::map<double, std::shared_ptr<const InnovationKernel>> cache;
    auto kernel_for = [&](double H) {
        auto it = cache.find(H);
        if (it != cache.end()) return it->second;
        auto k = std::make_shared<const InnovationKernel>(H, path.delta, n, opt.nystrom_m, false);
        cache.emplace(H, k);
        return k;
    };
    auto negll = [&](const ThetaParams& th) { return -girsanov_loglik(path, th, *kernel_for(th.hurst)); };
    const auto fit = minimize_over_domain(negll, init, budget);

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

Mat2 empirical_fisher(const ThetaParams& theta0, double T, double delta, std::size_t reps,
                      std::uint64_t master_seed, int threads, int nystrom_m) {
    if (!(T > 0.0) || !(delta > 0.0)) throw DomainError("T and delta must be positive");
    const double ratio = T / delta;
    const std::size_t n = std::size_t(std::llround(ratio));
    if (std::abs(ratio - double(n)) > 1e-9 * ratio) throw ShapeError("T is not a multiple of delta");
    if (n > 1000) throw DomainError("empirical_fisher is limited to T/delta <= 1000");
    if (n < 2 || reps < 1) throw DomainError("need n >= 2 and reps >= 1");

    const InnovationKernel kernel(theta0.hurst, delta, n, nystrom_m, true);
    const CirculantSampler sampler(n, theta0.hurst, delta);
    std::vector<Mat2> per(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        const auto path = build_ou_path(sampler.sample(derive_replication_seed(master_seed, r)), theta0.alpha);
        const auto ip = innovation_drift(path, theta0, kernel);
        Mat2 acc{0.0, 0.0, 0.0, 0.0};
        for (std::size_t k = n / 2; k < n; ++k) {
            const auto [d1, d2] = ip.grad_b[k];
            acc[0] += d1 * d1;
            acc[1] += d1 * d2;
            acc[3] += d2 * d2;
        }
        const double scale = 1.0 / double(n - n / 2);
        per[r] = {acc[0] * scale, acc[1] * scale, acc[1] * scale, acc[3] * scale};
    });
    Mat2 out{0.0, 0.0, 0.0, 0.0};
    for (const auto& p : per)
        for (int i = 0; i < 4; ++i) out[i] += p[i];
    for (double& v : out) v /= double(reps);
    return out;
}

}  // namespace mfou
