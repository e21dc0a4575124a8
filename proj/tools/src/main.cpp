#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfou/errors.hpp"
#include "mfou/estimate.hpp"
#include "mfou/innovation.hpp"
#include "mfou/io.hpp"
#include "mfou/spectral.hpp"
#include "suites.hpp"

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kIo = 3, kNumeric = 4 };

// domain problem tied to a flag; mapped to exit code 2
struct FlagError {
    std::string flag, message;
};

void require(bool ok, const std::string& flag, const std::string& message) {
    if (!ok) throw FlagError{flag, message};
}

mfou::ThetaParams theta_flags(double alpha, double hurst) {
    require(alpha > 0.0 && std::isfinite(alpha), "--alpha", "must be positive");
    require(hurst > 0.75 && hurst < 1.0, "--hurst", "must lie in (0.75, 1)");
    return {alpha, hurst};
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

void write_json(const std::string& file, const json& j) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw mfou::IoError("cannot open " + file + " for writing");
    os << j.dump(2) << '\n';
    if (!os) throw mfou::IoError("write failed: " + file);
}

// gnuplot-friendly two-column file
void write_columns(const std::string& file, const std::vector<double>& a, const std::vector<double>& b) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw mfou::IoError("cannot open " + file + " for writing");
    char buf[64];
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a[i], b[i]);
        os << buf;
    }
    if (!os) throw mfou::IoError("write failed: " + file);
}

json estimation_json(const mfou::EstimationResult& r) {
    return {{"alpha_hat", r.theta_hat.alpha}, {"hurst_hat", r.theta_hat.hurst}, {"objective", r.objective},
            {"converged", r.converged},       {"stderr_alpha", r.stderr_alpha},    {"stderr_hurst", r.stderr_hurst}};
}

json mat_json(const mfou::Mat2& m) { return json::array({m[0], m[1], m[2], m[3]}); }

mfou::SamplePath load_path(const std::string& input, double delta_flag) {
    auto path = mfou::read_path_csv(input);
    if (delta_flag > 0.0) {
        require(std::abs(path.delta - delta_flag) <= 1e-9 * delta_flag, "--delta",
                "does not match the grid step " + std::to_string(path.delta) + " of " + input);
        path.delta = delta_flag;
    }
    return path;
}

// `key = value` lines from --config become `--key=value` unless the flag was given explicitly.
std::vector<std::string> inject_config(std::vector<std::string> args) {
    std::string file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
            args.erase(args.begin() + long(i), args.begin() + long(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            args.erase(args.begin() + long(i));
            break;
        }
    }
    if (file.empty()) return args;
    std::ifstream is(file);
    if (!is) throw mfou::IoError("cannot open config file " + file);
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string line;
    std::vector<std::string> extra;
    while (std::getline(is, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FlagError{"--config", "line without '=': " + line};
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        bool given = false;
        for (const auto& a : args)
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) given = true;
        if (!given) extra.push_back("--" + key + "=" + value);
    }
    // after the subcommand name so the options bind to it
    const auto pos = args.size() > 1 ? args.begin() + 2 : args.end();
    args.insert(pos, extra.begin(), extra.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed fractional Ornstein-Uhlenbeck simulation and estimation"};
    app.require_subcommand(1);
    int threads = 1;
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", threads, "worker threads")->envname("MFOU_THREADS")->check(CLI::PositiveNumber);
    };

    double alpha = 2.0, hurst = 0.8, delta = 0.0, tol = 1e-9, horizon = 0.0;
    long long n = 0;
    std::uint64_t seed = 1;
    std::string out, input, plot, suite;
    int K = 200, budget = 500, nystrom_m = 64;
    bool no_tail = false, crosscheck = false;
    double init_alpha = 1.0, init_hurst = 0.85;
    long long reps = 100;

    auto* sim = app.add_subcommand("simulate", "simulate a sampled path to CSV");
    sim->add_option("--alpha", alpha)->required();
    sim->add_option("--hurst", hurst)->required();
    sim->add_option("--delta", delta)->required();
    sim->add_option("--n", n, "number of steps")->required();
    sim->add_option("--seed", seed)->required();
    sim->add_option("--out", out)->required();
    sim->add_option("--plot-data", plot, "write `t x` columns to this file");

    auto add_estimation = [&](CLI::App* sub) {
        sub->add_option("--input", input)->required();
        sub->add_option("--delta", delta, "expected grid step (checked against the file)");
        sub->add_option("--init-alpha", init_alpha);
        sub->add_option("--init-hurst", init_hurst);
        sub->add_option("--budget", budget, "optimizer iteration cap");
    };
    auto* whit = app.add_subcommand("whittle", "Whittle estimate from a path CSV");
    add_estimation(whit);
    whit->add_option("--K", K, "aliasing truncation");
    whit->add_flag("--no-tail-correction", no_tail);
    whit->add_option("--plot-data", plot, "prefix for periodogram and spectral density columns");

    auto* mle = app.add_subcommand("mle", "continuous-record maximum likelihood from a path CSV");
    add_estimation(mle);
    mle->add_option("--nystrom-m", nystrom_m, "Nystrom cells for the kernel g");

    auto* fish = app.add_subcommand("fisher", "Fisher information matrix");
    fish->add_option("--alpha", alpha)->required();
    fish->add_option("--hurst", hurst)->required();
    fish->add_option("--tol", tol);
    fish->add_option("--horizon", horizon, "also report phi(T)");
    fish->add_flag("--crosscheck", crosscheck, "also evaluate i12 from the complex form");

    auto* mc = app.add_subcommand("montecarlo", "repeated simulation and Whittle estimation");
    mc->add_option("--alpha", alpha);
    mc->add_option("--hurst", hurst);
    mc->add_option("--delta", delta);
    mc->add_option("--n", n);
    mc->add_option("--reps", reps);
    mc->add_option("--seed", seed);
    mc->add_option("--K", K);
    mc->add_option("--budget", budget);
    mc->add_option("--out", out)->required();
    add_threads(mc);

    auto* ver = app.add_subcommand("verify", "run an invariant suite");
    ver->add_option("--suite", suite)->required();
    ver->add_option("--alpha", alpha);
    ver->add_option("--hurst", hurst);
    ver->add_option("--reps", reps);
    ver->add_option("--seed", seed);
    ver->add_option("--out", out, "also write the report here");
    ver->add_option("--g-csv", plot, "innovation suite: export s,g,dg_dH at t = 20");
    add_threads(ver);

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = inject_config(std::move(args));
        std::vector<char*> cargs;
        for (auto& a : args) cargs.push_back(a.data());
        try {
            app.parse(int(cargs.size()), cargs.data());
        } catch (const CLI::ParseError& e) {
            const int rc = app.exit(e);
            return rc == 0 ? kOk : kUsage;
        }

        if (*sim) {
            const auto th = theta_flags(alpha, hurst);
            require(delta > 0.0 && std::isfinite(delta), "--delta", "must be positive");
            require(n >= 1, "--n", "must be at least 1");
            const auto path = mfou::build_ou_path(mfou::simulate_mixed_increments(std::size_t(n), th.hurst, delta, seed), th.alpha);
            mfou::write_path_csv(out, path);
            if (!plot.empty()) {
                std::vector<double> t(path.size());
                for (std::size_t k = 0; k < t.size(); ++k) t[k] = double(k) * delta;
                write_columns(plot, t, path.values);
            }
            double m = 0.0, v = 0.0;
            for (double x : path.values) m += x;
            m /= double(path.size());
            for (double x : path.values) v += (x - m) * (x - m);
            v /= double(path.size() - 1);
            std::printf("n=%lld T=%.17g sample_variance=%.17g\n", n, path.horizon(), v);
        } else if (*whit) {
            require(K >= 1, "--K", "must be at least 1");
            require(budget >= 1, "--budget", "must be at least 1");
            const auto init = theta_flags(init_alpha, init_hurst);
            const auto path = load_path(input, delta);
            const mfou::SpectralConfig cfg{K, !no_tail};
            const auto r = mfou::whittle_estimate(path, cfg, init, budget);
            if (!plot.empty()) {
                const auto pg = mfou::periodogram(path);
                const mfou::SpectralDensity f(r.theta_hat, path.delta, cfg);
                std::vector<double> lam(pg.ordinates.size()), fv(lam.size());
                for (std::size_t i = 0; i < lam.size(); ++i) fv[i] = f(lam[i] = pg.frequency(i));
                write_columns(plot + "_periodogram.dat", lam, pg.ordinates);
                write_columns(plot + "_fdelta.dat", lam, fv);
            }
            print_json(estimation_json(r));
        } else if (*mle) {
            require(budget >= 1, "--budget", "must be at least 1");
            require(nystrom_m >= 16, "--nystrom-m", "must be at least 16");
            const auto init = theta_flags(init_alpha, init_hurst);
            const auto path = load_path(input, delta);
            mfou::MleOptions mo;
            mo.nystrom_m = nystrom_m;
            require(path.size() - 1 <= mo.max_steps, "--input",
                    std::to_string(path.size() - 1) + " steps exceed the continuous-record limit of " +
                        std::to_string(mo.max_steps) + "; use `whittle` for long paths");
            print_json(estimation_json(mfou::mle_continuous(path, init, budget, mo)));
        } else if (*fish) {
            const auto th = theta_flags(alpha, hurst);
            require(tol > 0.0 && tol <= 1e-4, "--tol", "must lie in (0, 1e-4]");
            const auto F = mfou::fisher_information(th, tol);
            json j{{"i11", F.i11}, {"i12", F.i12}, {"i22", F.i22}, {"quad_tol", F.quad_tol}};
            if (horizon != 0.0) {
                require(horizon > 0.0, "--horizon", "must be positive");
                j["phi"] = mat_json(mfou::local_scaling(horizon, F));
            }
            if (crosscheck) {
                const double c = mfou::fisher_i12_complex_form(th, tol);
                j["i12_complex_form"] = c;
                j["i12_difference"] = std::abs(c - F.i12);
            }
            print_json(j);
        } else if (*mc) {
            if (delta == 0.0) delta = 0.001;
            if (n == 0) n = 100000;
            const auto th = theta_flags(alpha, hurst);
            require(delta > 0.0, "--delta", "must be positive");
            require(n >= 256, "--n", "must be at least 256");
            require(reps >= 1, "--reps", "must be at least 1");
            require(K >= 1, "--K", "must be at least 1");
            mfou::MonteCarloOptions mo;
            mo.cfg.truncation_K = K;
            mo.opt_budget = budget;
            mo.threads = threads;
            const auto s = mfou::run_monte_carlo(th, delta, std::size_t(n), std::size_t(reps), seed, mo);
            json j{{"reps", s.reps},
                   {"mean_alpha", s.mean_alpha},
                   {"mean_hurst", s.mean_hurst},
                   {"sample_cov", mat_json(s.sample_cov)},
                   {"fisher_inverse", mat_json(s.fisher_inverse)},
                   {"failures", s.failures},
                   {"master_seed", s.master_seed},
                   {"config",
                    {{"alpha", th.alpha}, {"hurst", th.hurst}, {"delta", delta}, {"n", s.n}, {"truncation_K", K}}}};
            write_json(out, j);
            std::printf("mean_alpha=%.17g mean_hurst=%.17g failures=%zu\n", s.mean_alpha, s.mean_hurst, s.failures);
        } else if (*ver) {
            mfou::cli::SuiteOptions so;
            so.alpha = alpha;
            so.hurst = hurst;
            so.seed = seed;
            so.threads = threads;
            so.g_csv = plot;
            if (ver->count("--reps") == 0) reps = 500;
            require(reps >= 2, "--reps", "must be at least 2");
            so.reps = std::size_t(reps);
            theta_flags(alpha, hurst);
            mfou::cli::SuiteReport rep;
            if (suite == "lemmas") rep = mfou::cli::run_lemmas_suite(so);
            else if (suite == "innovation") rep = mfou::cli::run_innovation_suite(so);
            else if (suite == "fisher") rep = mfou::cli::run_fisher_suite(so);
            else throw FlagError{"--suite", "unknown suite '" + suite + "' (lemmas, innovation, fisher)"};
            const json j = rep.to_json();
            if (!out.empty()) write_json(out, j);
            print_json(j);
            return rep.passed() ? kOk : kVerifyFailed;
        }
        return kOk;
    } catch (const FlagError& e) {
        std::cerr << "error: " << e.flag << ": " << e.message << '\n';
        return kUsage;
    } catch (const mfou::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const mfou::AccuracyError& e) {
        std::cerr << "accuracy error: " << e.what() << " (estimate " << e.estimate << ", error bound "
                  << e.error_bound << ")\n";
        return kNumeric;
    } catch (const mfou::ConditioningError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const mfou::EmbeddingFailure& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const mfou::DegenerateInformation& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const mfou::HarnessError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const mfou::Error& e) {
        // domain, shape, parse and data errors
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
