#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mfou/estimate.hpp"
#include "mfou/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;  // stdout and stderr interleaved
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string(MFOU_BIN) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const std::string& file) {
    std::ifstream is(file, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = fs::temp_directory_path() / "mfou_cli_test";
        fs::create_directories(dir_);
    }
    static std::string path(const std::string& name) { return (dir_ / name).string(); }
    static std::string paper_path() {
        const auto f = path("paper.csv");
        if (!fs::exists(f)) run("simulate --alpha 2 --hurst 0.8 --delta 0.001 --n 100000 --seed 1 --out " + f);
        return f;
    }
    static inline fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulatePaperConfiguration) {
    const auto a = path("sim_a.csv"), b = path("sim_b.csv");
    const auto r = run("simulate --alpha 2 --hurst 0.8 --delta 0.001 --n 100000 --seed 1 --out " + a);
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("n=100000"), std::string::npos);
    EXPECT_NE(r.out.find("sample_variance="), std::string::npos);
    std::ifstream is(a);
    std::string line;
    std::size_t rows = 0;
    std::getline(is, line);
    EXPECT_EQ(line, "t,x");
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 100001u);
    ASSERT_EQ(run("simulate --alpha 2 --hurst 0.8 --delta 0.001 --n 100000 --seed 1 --out " + b).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(Cli, SimulateErrors) {
    const auto r = run("simulate --alpha 2 --hurst 0.7 --delta 0.001 --n 100 --seed 1 --out " + path("x.csv"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("--hurst"), std::string::npos);
    EXPECT_EQ(run("simulate --alpha -1 --hurst 0.8 --delta 0.001 --n 100 --seed 1 --out " + path("x.csv")).code, 2);
    EXPECT_EQ(run("simulate --alpha 2 --hurst 0.8 --delta 0 --n 100 --seed 1 --out " + path("x.csv")).code, 2);
    EXPECT_EQ(run("simulate --alpha 2 --hurst 0.8 --delta 0.01 --n 100 --out " + path("x.csv")).code, 2);
    EXPECT_EQ(run("simulate --alpha 2 --hurst 0.8 --delta 0.01 --n 100 --seed 1 --bogus 3 --out " + path("x.csv")).code, 2);
    EXPECT_EQ(run("simulate --alpha 2 --hurst 0.8 --delta 0.01 --n 100 --seed 1 --out /nonexistent-dir/x.csv").code, 3);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, WhittleOnSimulatedPath) {
    const auto f = paper_path();
    const auto r1 = run("whittle --input " + f + " --delta 0.001");
    ASSERT_EQ(r1.code, 0) << r1.out;
    const auto j = json::parse(r1.out);
    EXPECT_GE(j["alpha_hat"].get<double>(), 1.2);
    EXPECT_LE(j["alpha_hat"].get<double>(), 3.2);
    EXPECT_GE(j["hurst_hat"].get<double>(), 0.75);
    EXPECT_LE(j["hurst_hat"].get<double>(), 0.95);
    for (const char* k : {"objective", "converged", "stderr_alpha", "stderr_hurst"}) EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(run("whittle --input " + f + " --delta 0.001").out, r1.out);

    // the file reproduces the in-memory path, so the in-process estimate is identical
    const auto path = mfou::build_ou_path(mfou::simulate_mixed_increments(100000, 0.8, 0.001, 1), 2.0);
    const auto e = mfou::whittle_estimate(path);
    EXPECT_EQ(j["alpha_hat"].get<double>(), e.theta_hat.alpha);
    EXPECT_EQ(j["hurst_hat"].get<double>(), e.theta_hat.hurst);
}

TEST_F(Cli, WhittleErrors) {
    const auto f = paper_path();
    EXPECT_EQ(run("whittle --input " + f + " --delta 0.002").code, 2);
    std::ofstream(path("bad.csv")) << "t\n0\n0.1\n";
    EXPECT_EQ(run("whittle --input " + path("bad.csv")).code, 2);
    EXPECT_EQ(run("whittle --input " + path("missing.csv")).code, 3);
}

TEST_F(Cli, WhittlePlotData) {
    const auto small = path("small.csv");
    ASSERT_EQ(run("simulate --alpha 2 --hurst 0.8 --delta 0.01 --n 4096 --seed 3 --out " + small).code, 0);
    ASSERT_EQ(run("whittle --input " + small + " --plot-data " + path("plot")).code, 0);
    for (const char* suffix : {"_periodogram.dat", "_fdelta.dat"}) {
        std::ifstream is(path("plot") + suffix);
        std::string line;
        std::size_t rows = 0;
        while (std::getline(is, line)) ++rows;
        EXPECT_EQ(rows, 2048u) << suffix;
    }
}

TEST_F(Cli, Fisher) {
    const auto r = run("fisher --alpha 2 --hurst 0.8 --crosscheck --horizon 4");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["i22"].get<double>(), 0.25, 1e-12);
    EXPECT_LT(j["i12_difference"].get<double>(), 1e-8);
    EXPECT_EQ(j["phi"].size(), 4u);
    EXPECT_EQ(run("fisher --alpha 2 --hurst 0.8 --tol 0.01").code, 2);
    EXPECT_EQ(run("fisher --alpha 2 --hurst 1.2").code, 2);

    double prev = INFINITY, last = 0.0;
    bool first = true;
    for (const char* tol : {"1e-5", "1e-7", "1e-9", "1e-11"}) {
        const double v = json::parse(run(std::string("fisher --alpha 2 --hurst 0.8 --tol ") + tol).out)["i11"].get<double>();
        if (!first) {
            const double change = std::abs(v - last);
            EXPECT_LE(change, prev + 1e-12);
            prev = change;
        }
        first = false;
        last = v;
    }
}

TEST_F(Cli, FisherAccuracyFailureExitsFour) {
    const auto r = run("fisher --alpha 2 --hurst 0.8 --tol 1e-300");
    EXPECT_EQ(r.code, 4) << r.out;
    EXPECT_NE(r.out.find("error bound"), std::string::npos);
}

TEST_F(Cli, MonteCarlo) {
    const auto one = path("mc1.json");
    ASSERT_EQ(run("montecarlo --alpha 2 --hurst 0.8 --delta 0.01 --n 4096 --reps 1 --seed 9 --out " + one).code, 0);
    const auto j = json::parse(slurp(one));
    for (const char* k : {"reps", "mean_alpha", "mean_hurst", "sample_cov", "fisher_inverse", "failures", "master_seed", "config"})
        EXPECT_TRUE(j.contains(k)) << k;
    for (const char* k : {"alpha", "hurst", "delta", "n", "truncation_K"}) EXPECT_TRUE(j["config"].contains(k)) << k;
    const auto e = mfou::whittle_estimate(
        mfou::build_ou_path(mfou::CirculantSampler(4096, 0.8, 0.01).sample(mfou::derive_replication_seed(9, 0)), 2.0));
    EXPECT_EQ(j["mean_alpha"].get<double>(), e.theta_hat.alpha);
    EXPECT_EQ(j["mean_hurst"].get<double>(), e.theta_hat.hurst);

    const auto t1 = path("mc_t1.json"), t8 = path("mc_t8.json"), tenv = path("mc_env.json");
    const std::string base = "montecarlo --alpha 2 --hurst 0.8 --delta 0.01 --n 4096 --reps 6 --seed 3 --out ";
    ASSERT_EQ(run(base + t1 + " --threads 1").code, 0);
    ASSERT_EQ(run(base + t8 + " --threads 8").code, 0);
    ASSERT_EQ(run(base + tenv, "MFOU_THREADS=4").code, 0);
    EXPECT_EQ(slurp(t1), slurp(t8));
    EXPECT_EQ(slurp(t1), slurp(tenv));
    EXPECT_EQ(run(base + t1 + " --reps 0").code, 2);
}

TEST_F(Cli, Verify) {
    for (const char* s : {"lemmas", "fisher", "innovation"}) {
        const auto rep = path(std::string("verify_") + s + ".json");
        const auto r = run(std::string("verify --suite ") + s + " --out " + rep);
        EXPECT_EQ(r.code, 0) << r.out;
        const auto j = json::parse(slurp(rep));
        EXPECT_TRUE(j["passed"].get<bool>());
        EXPECT_FALSE(j["checks"].empty());
        for (const auto& c : j["checks"]) {
            EXPECT_TRUE(c.contains("value"));
            EXPECT_TRUE(c.contains("threshold"));
        }
    }
    const auto lem = json::parse(slurp(path("verify_lemmas.json")));
    EXPECT_EQ(lem["factorization"].size(), 20u);
    EXPECT_TRUE(lem["factorization"][0].contains("z_re"));
    EXPECT_EQ(run("verify --suite nonsense").code, 2);
}

TEST_F(Cli, VerifyFailureExitsOne) {
    // two replications cannot pin the innovation variance to 10%
    const auto r = run("verify --suite innovation --reps 2 --seed 5");
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_NO_THROW(json::parse(r.out.substr(r.out.find('{'))));
}

TEST_F(Cli, Mle) {
    const auto f = path("mle.csv");
    ASSERT_EQ(run("simulate --alpha 2 --hurst 0.8 --delta 0.01 --n 2000 --seed 1 --out " + f).code, 0);
    const auto r = run("mle --input " + f + " --delta 0.01");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["converged"].get<bool>());
    EXPECT_GT(j["alpha_hat"].get<double>(), 0.0);
    EXPECT_GT(j["hurst_hat"].get<double>(), 0.75);
    EXPECT_LT(j["hurst_hat"].get<double>(), 1.0);
    EXPECT_EQ(run("mle --input " + f + " --delta 0.01").out, r.out);

    const auto big = run("mle --input " + paper_path());
    EXPECT_EQ(big.code, 2);
    EXPECT_NE(big.out.find("whittle"), std::string::npos);
}

TEST_F(Cli, ConfigFile) {
    const auto cfg = path("run.cfg");
    std::ofstream(cfg) << "# paper setting\nalpha = 2\nhurst = 0.8\ndelta = 0.01\nn = 300\nseed = 4\n";
    const auto a = path("cfg_a.csv"), b = path("cfg_b.csv"), c = path("cfg_c.csv");
    ASSERT_EQ(run("simulate --config " + cfg + " --out " + a).code, 0);
    ASSERT_EQ(run("simulate --alpha 2 --hurst 0.8 --delta 0.01 --n 300 --seed 4 --out " + b).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    // flags win over the file
    ASSERT_EQ(run("simulate --config " + cfg + " --seed 5 --out " + c).code, 0);
    ASSERT_EQ(run("simulate --alpha 2 --hurst 0.8 --delta 0.01 --n 300 --seed 5 --out " + b).code, 0);
    EXPECT_EQ(slurp(c), slurp(b));

    std::ofstream(path("unknown.cfg")) << "colour = blue\n";
    EXPECT_EQ(run("simulate --config " + path("unknown.cfg") + " --alpha 2 --hurst 0.8 --delta 0.01 --n 3 --seed 1 --out " + a).code, 2);
    EXPECT_EQ(run("simulate --config " + path("none.cfg") + " --out " + a).code, 3);
}
