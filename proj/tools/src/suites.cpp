#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "mfou/analytic.hpp"
#include "mfou/estimate.hpp"
#include "mfou/innovation.hpp"
#include "mfou/io.hpp"
#include "mfou/parallel.hpp"

namespace mfou::cli {

namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

Check at_most(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, "<=", value <= threshold};
}

Check below(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, "<", value < threshold};
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

}  // namespace

bool SuiteReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

nlohmann::json SuiteReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["passed"] = passed();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        j["checks"].push_back(
            {{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"relation", c.relation}, {"passed", c.passed}});
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return j;
}

SuiteReport run_lemmas_suite(const SuiteOptions& opt) {
    SuiteReport rep;
    rep.suite = "lemmas";
    const double H = opt.hurst;
    const AnalyticFactorization af(H);

    const auto fr = af.verify_factorization(factorization_grid());
    rep.checks.push_back(at_most("factorization_max_residual", fr.max_residual, 1e-4));
    auto pts = nlohmann::json::array();
    for (std::size_t i = 0; i < fr.points.size(); ++i)
        pts.push_back({{"z_re", fr.points[i].real()}, {"z_im", fr.points[i].imag()}, {"residual", fr.residuals[i]}});
    rep.extra["factorization"] = pts;

    double conj_err = 0.0, ratio_err = 0.0;
    for (double tau : {0.1, 1.0, 10.0, -0.1, -1.0, -10.0}) {
        const C p = af.lambda_boundary(tau, BoundarySide::plus), m = af.lambda_boundary(tau, BoundarySide::minus);
        conj_err = std::max(conj_err, std::abs(p - std::conj(m)));
        const C lhs = p / m;
        const C rhs = af.lambda_boundary(-tau, BoundarySide::minus) / af.lambda_boundary(-tau, BoundarySide::plus);
        ratio_err = std::max(ratio_err, std::abs(lhs - rhs));
    }
    rep.checks.push_back(at_most("boundary_conjugate_symmetry", conj_err, 1e-12));
    rep.checks.push_back(at_most("boundary_ratio_symmetry", ratio_err, 1e-12));

    // boundary value as the limit of Lambda(tau + i eps), linear extrapolation in eps
    double lim_err = 0.0;
    for (double tau : {0.5, 1.0, 3.0, -0.5, -1.0, -3.0}) {
        const C l4 = af.lambda_z(C(tau, 1e-4)), l5 = af.lambda_z(C(tau, 1e-5));
        const C extrap = l5 - (l4 - l5) / 9.0;
        lim_err = std::max(lim_err, std::abs(extrap - af.lambda_boundary(tau, BoundarySide::plus)));
    }
    rep.checks.push_back(at_most("boundary_limit_from_upper_half_plane", lim_err, 1e-3));

    rep.checks.push_back(
        at_most("alpha_at_zero_plus", std::abs(af.arg_alpha(1e-200) - kPi * (H - 0.5)), 1e-10));

    const auto grid = log_grid(1e-6, 1e6, 100);
    double max_step = -INFINITY, arg_err = 0.0, odd_err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = af.arg_alpha(grid[i]);
        if (i + 1 < grid.size()) max_step = std::max(max_step, af.arg_alpha(grid[i + 1]) - a);
        arg_err = std::max(arg_err, std::abs(std::arg(af.lambda_boundary(grid[i], BoundarySide::plus)) - a));
        odd_err = std::max(odd_err, std::abs(af.arg_alpha(-grid[i]) + a));
    }
    rep.checks.push_back(below("alpha_strictly_decreasing_max_step", max_step, 0.0));
    rep.checks.push_back(at_most("alpha_odd", odd_err, 0.0));
    rep.checks.push_back(at_most("boundary_argument_equals_alpha", arg_err, 1e-10));

    auto scaled = [&](double tau) { return af.arg_alpha(tau) * std::pow(tau, 2.0 * H - 1.0); };
    rep.checks.push_back(at_most("alpha_power_law_ratio_1e3_1e4", std::abs(scaled(1e3) / scaled(1e4) - 1.0), 0.02));

    double refl = 0.0;
    for (const C& z : factorization_grid()) refl = std::max(refl, std::abs(af.yc(std::conj(z)) - std::conj(af.yc(z))));
    rep.checks.push_back(at_most("yc_schwarz_reflection", refl, 1e-12));
    rep.checks.push_back(below("yc_imag_at_minus_one", std::abs(af.yc(-1.0).imag()), 1e-8));
    rep.checks.push_back(below("yc_at_minus_1e4_minus_one", std::abs(af.yc(-1e4) - 1.0), 1e-2));
    const double slope = (std::log(std::abs(af.yc(-1e-4))) - std::log(std::abs(af.yc(-1e-6)))) / (std::log(1e-4) - std::log(1e-6));
    rep.checks.push_back(at_most("yc_small_z_slope_rel_error", std::abs(slope / (0.5 - H) - 1.0), 0.05));
    return rep;
}

SuiteReport run_innovation_suite(const SuiteOptions& opt) {
    SuiteReport rep;
    rep.suite = "innovation";
    const double H = opt.hurst;

    const auto cst = solve_g_kernel(PowerKernel::constant(1.0), 1.0, 64, 1e-4);
    double cerr = 0.0;
    for (double g : cst.g_values) cerr = std::max(cerr, std::abs(g - 0.5));
    rep.checks.push_back(at_most("constant_kernel_closed_form", cerr, 1e-10));

    for (double t : {1.0, 5.0, 20.0}) {
        const auto s = solve_g(t, H, 512, INFINITY);
        rep.checks.push_back(at_most("fredholm_residual_m512_t" + std::to_string(int(t)), s.residual_sup, 1e-4));
        if (t == 20.0 && !opt.g_csv.empty()) write_g_csv(opt.g_csv, s);
    }
    const double r32 = solve_g(5.0, H, 32, INFINITY).residual_sup;
    const double r128 = solve_g(5.0, H, 128, INFINITY).residual_sup;
    const double r512 = solve_g(5.0, H, 512, INFINITY).residual_sup;
    rep.checks.push_back(below("refinement_ratio_m128_over_m32", r128 / r32, 1.0));
    rep.checks.push_back(below("refinement_ratio_m512_over_m128", r512 / r128, 1.0));

    {
        const double h = 1e-4, t = 5.0;
        const auto s0 = solve_g(t, H, 128, INFINITY);
        const auto sp = solve_g(t, H + h, 128, INFINITY);
        const auto sm = solve_g(t, H - h, 128, INFINITY);
        double err = 0.0;
        for (std::size_t i = 0; i < s0.nodes.size(); ++i) {
            if (s0.nodes[i] < 0.1 * t || s0.nodes[i] > 0.9 * t) continue;
            const double fd = (sp.g_values[i] - sm.g_values[i]) / (2.0 * h);
            err = std::max(err, std::abs(s0.dH_values[i] - fd) / std::max(std::abs(fd), 1e-12));
        }
        rep.checks.push_back(at_most("dH_g_vs_central_difference", err, 1e-4));
    }

    // whiteness of the reconstructed innovation at T = 10, delta = 0.01
    const double delta = 0.01;
    const std::size_t n = 1000;
    const InnovationKernel kernel(H, delta, n, 64, false);
    const CirculantSampler sampler(n, H, delta);
    struct Stats {
        double bT2 = 0.0;
        double acf[6] = {};
    };
    std::vector<Stats> per(opt.reps);
    parallel_for(opt.reps, opt.threads, [&](std::size_t r) {
        const auto M = sampler.sample(derive_replication_seed(opt.seed, r));
        const auto ip = reconstruct_innovation(M, kernel);
        const auto& b = ip.bbar_values;
        std::vector<double> d(n);
        double mean = 0.0;
        for (std::size_t k = 0; k < n; ++k) mean += (d[k] = b[k + 1] - b[k]);
        mean /= double(n);
        double c0 = 0.0;
        for (double& v : d) c0 += (v - mean) * (v - mean);
        Stats s;
        s.bT2 = b[n] * b[n];
        for (int l = 1; l <= 5; ++l) {
            double cl = 0.0;
            for (std::size_t k = 0; k + l < n; ++k) cl += (d[k] - mean) * (d[k + l] - mean);
            s.acf[l] = cl / c0;
        }
        per[r] = s;
    });
    double var = 0.0, acf[6] = {};
    for (const auto& s : per) {
        var += s.bT2;
        for (int l = 1; l <= 5; ++l) acf[l] += s.acf[l];
    }
    const double T = double(n) * delta;
    var /= double(opt.reps) * T;
    rep.checks.push_back({"innovation_variance_ratio", var, 0.1, "|value-1|<=", std::abs(var - 1.0) <= 0.1});
    const double band = 3.0 / std::sqrt(double(n));
    for (int l = 1; l <= 5; ++l)
        rep.checks.push_back(at_most("innovation_acf_lag" + std::to_string(l) + "_abs", std::abs(acf[l] / double(opt.reps)), band));
    rep.extra["config"] = {{"hurst", H}, {"delta", delta}, {"n", n}, {"reps", opt.reps}, {"master_seed", opt.seed}};
    return rep;
}

SuiteReport run_fisher_suite(const SuiteOptions& opt) {
    SuiteReport rep;
    rep.suite = "fisher";
    const ThetaParams th(opt.alpha, opt.hurst);
    const auto F = fisher_information(th, 1e-9);
    rep.checks.push_back(at_most("i22_minus_half_inverse_alpha", std::abs(F.i22 - 0.5 / th.alpha), 1e-8));
    rep.checks.push_back(at_most("i12_two_forms_difference", std::abs(F.i12 - fisher_i12_complex_form(th, 1e-9)), 1e-8));
    rep.checks.push_back({"determinant", F.i11 * F.i22 - F.i12 * F.i12, 0.0, ">", F.i11 * F.i22 - F.i12 * F.i12 > 0.0});
    // i12 decays like alpha^{1-2H} log alpha
    double prev = std::abs(F.i12);
    bool decreasing = true;
    for (double a : {1e3, 1e5, 1e6}) {
        const double v = std::abs(fisher_information(ThetaParams(a, opt.hurst), 1e-9).i12);
        decreasing = decreasing && v < prev;
        prev = v;
    }
    rep.checks.push_back({"i12_decreasing_in_alpha", decreasing ? 1.0 : 0.0, 1.0, "==", decreasing});
    auto rate = [&](double a) { return std::pow(a, 1.0 - 2.0 * opt.hurst) * std::log(a); };
    const double r = fisher_information(ThetaParams(1e6, opt.hurst), 1e-9).i12 /
                     fisher_information(ThetaParams(1e5, opt.hurst), 1e-9).i12;
    rep.checks.push_back(at_most("i12_decay_rate_error", std::abs(r / (rate(1e6) / rate(1e5)) - 1.0), 0.03));

    const double a = fisher_information(th, 1e-5).i11, b = fisher_information(th, 1e-7).i11;
    const double d1 = std::abs(a - F.i11), d2 = std::abs(b - F.i11);
    rep.checks.push_back(at_most("self_convergence_change_growth", d2 - d1, 1e-13));

    const double T = 7.0;
    const auto phi = local_scaling(T, F);
    const auto I = F.matrix();
    double err = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double v = 0.0;
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) v += phi[2 * i + k] * phi[2 * l + k] * T * I[2 * l + j];
            err = std::max(err, std::abs(v - (i == j ? 1.0 : 0.0)));
        }
    rep.checks.push_back(at_most("local_scaling_identity", err, 1e-10));
    rep.extra["fisher"] = {{"i11", F.i11}, {"i12", F.i12}, {"i22", F.i22}, {"quad_tol", F.quad_tol}};
    return rep;
}

}  // namespace mfou::cli
