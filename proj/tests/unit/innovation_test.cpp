#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

#include "mfou/errors.hpp"
#include "mfou/innovation.hpp"

using namespace mfou;

namespace {

SamplePath sim_path(double alpha, double H, double delta, std::size_t n, std::uint64_t seed) {
    return build_ou_path(simulate_mixed_increments(n, H, delta, seed), alpha);
}

}  // namespace

TEST(InnovationKernel, WeightsAreCellAveragesOfG) {
    const double H = 0.8, delta = 0.25;
    const std::size_t n = 12;
    // same Nystrom grid on both sides, so only the cell integration is compared
    const InnovationKernel ker(H, delta, n, 256, false);
    const PowerKernel pk = PowerKernel::fractional(H);
    UnitFredholm uf(pk, 256, false);
    boost::math::quadrature::tanh_sinh<double> ts;
    for (std::size_t k : {1u, 5u, 12u}) {
        const double t = double(k) * delta;
        const auto c = uf.solve(t, false);
        const double tb = std::pow(t, pk.beta);
        auto g = [&](double u) { const double x = u / t; return x <= 0 ? 0.0 : tb * (pk.coef * std::pow(x, pk.beta) - uf.phi(x, c)); };
        for (std::size_t j = 1; j <= k; ++j) {
            const double lo = double(k - j) * delta, hi = lo + delta;
            std::vector<double> br{lo};
            for (double x : uf.mesh())
                if (x * t > lo && x * t < hi) br.push_back(x * t);
            br.push_back(hi);
            double avg = 0.0;
            for (std::size_t b = 0; b + 1 < br.size(); ++b) avg += ts.integrate(g, br[b], br[b + 1], 1e-13);
            avg /= delta;
            EXPECT_NEAR(ker.weight(k, j), avg, 1e-8 * std::max(1.0, std::abs(avg))) << k << " " << j;
        }
    }
}

TEST(Drift, ZeroKernelDegenerates) {
    const auto p = sim_path(2.0, 0.8, 0.01, 200, 3);
    const auto ip = innovation_drift(p, ThetaParams(2.0, 0.8), InnovationKernel::zero(0.01, 200));
    ASSERT_EQ(ip.b_values.size(), p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        EXPECT_EQ(ip.b_values[k], -2.0 * p.values[k]);
        EXPECT_EQ(ip.grad_b[k].second, -p.values[k]);
        EXPECT_EQ(ip.grad_b[k].first, 0.0);
    }
}

TEST(Drift, NullPath) {
    SamplePath p;
    p.delta = 0.05;
    p.values.assign(41, 0.0);
    const InnovationKernel ker(0.8, 0.05, 40);
    const auto ip = innovation_drift(p, ThetaParams(2.0, 0.8), ker);
    for (std::size_t k = 0; k < p.size(); ++k) {
        EXPECT_EQ(ip.b_values[k], 0.0);
        EXPECT_EQ(ip.grad_b[k].first, 0.0);
        EXPECT_EQ(ip.grad_b[k].second, 0.0);
    }
    EXPECT_EQ(girsanov_loglik(p, ThetaParams(2.0, 0.8), ker), 0.0);
}

TEST(Drift, GradientMatchesFiniteDifferences) {
    const double H = 0.8, a = 2.0, delta = 0.1;
    const std::size_t n = 50;
    const auto p = sim_path(a, H, delta, n, 21);
    const double h = 1e-4;
    const auto ip = innovation_drift(p, ThetaParams(a, H), InnovationKernel(H, delta, n));
    const auto up = innovation_drift(p, ThetaParams(a, H + h), InnovationKernel(H + h, delta, n, 64, false));
    const auto dn = innovation_drift(p, ThetaParams(a, H - h), InnovationKernel(H - h, delta, n, 64, false));
    const InnovationKernel kh(H, delta, n, 64, false);
    const auto ap = innovation_drift(p, ThetaParams(a + h, H), kh);
    const auto am = innovation_drift(p, ThetaParams(a - h, H), kh);
    for (std::size_t k = 5; k < n; ++k) {
        const double fdH = (up.b_values[k] - dn.b_values[k]) / (2 * h);
        const double fda = (ap.b_values[k] - am.b_values[k]) / (2 * h);
        EXPECT_NEAR(ip.grad_b[k].first, fdH, 1e-3 * std::abs(fdH) + 1e-9) << k;
        EXPECT_NEAR(ip.grad_b[k].second, fda, 1e-8 * std::max(1.0, std::abs(fda))) << k;
    }
}

TEST(Drift, ShapeErrors) {
    const auto p = sim_path(2.0, 0.8, 0.01, 100, 3);
    EXPECT_THROW(innovation_drift(p, ThetaParams(2.0, 0.8), InnovationKernel(0.8, 0.01, 50)), ShapeError);
    EXPECT_THROW(innovation_drift(p, ThetaParams(2.0, 0.8), InnovationKernel(0.8, 0.02, 100)), ShapeError);
    EXPECT_THROW(innovation_drift(p, ThetaParams(2.0, 0.85), InnovationKernel(0.8, 0.01, 100)), ShapeError);
    EXPECT_NO_THROW(innovation_drift(p, ThetaParams(2.0, 0.8), InnovationKernel(0.8, 0.01, 150)));
}

TEST(Reconstruct, NullNoiseAndLayout) {
    MixedIncrements M;
    M.delta = 0.01;
    M.hurst = 0.8;
    M.values.assign(100, 0.0);
    const InnovationKernel ker(0.8, 0.01, 100, 64, false);
    const auto ip = reconstruct_innovation(M, ker);
    ASSERT_EQ(ip.bbar_values.size(), 101u);
    for (double v : ip.bbar_values) EXPECT_EQ(v, 0.0);
    const auto r = reconstruct_innovation(simulate_mixed_increments(100, 0.8, 0.01, 4), ker);
    EXPECT_EQ(r.bbar_values[0], 0.0);
    M.delta = 0.02;
    EXPECT_THROW(reconstruct_innovation(M, ker), ShapeError);
}

TEST(Reconstruct, Whiteness) {
    const double H = 0.8, delta = 0.01;
    const std::size_t n = 1000, reps = 500;
    const InnovationKernel ker(H, delta, n, 64, false);
    const CirculantSampler s(n, H, delta);
    double v = 0.0;
    std::vector<double> acf(6, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto b = reconstruct_innovation(s.sample(derive_replication_seed(3, r)), ker).bbar_values;
        v += b[n] * b[n];
        std::vector<double> d(n);
        double m = 0.0;
        for (std::size_t k = 0; k < n; ++k) m += (d[k] = b[k + 1] - b[k]);
        m /= double(n);
        double c0 = 0.0;
        for (double x : d) c0 += (x - m) * (x - m);
        for (int l = 1; l <= 5; ++l) {
            double cl = 0.0;
            for (std::size_t k = 0; k + l < n; ++k) cl += (d[k] - m) * (d[k + l] - m);
            acf[l] += cl / c0 / double(reps);
        }
    }
    const double ratio = v / double(reps) / (double(n) * delta);
    EXPECT_GE(ratio, 0.9);
    EXPECT_LE(ratio, 1.1);
    for (int l = 1; l <= 5; ++l) EXPECT_LE(std::abs(acf[l]), 3.0 / std::sqrt(double(n))) << l;
}

TEST(Girsanov, AppendingZeroIncrement) {
    const double H = 0.8, a = 2.0, delta = 0.02;
    const std::size_t n = 100;
    auto p = sim_path(a, H, delta, n, 8);
    const InnovationKernel ker(H, delta, n + 1, 64, false);
    const ThetaParams th(a, H);
    const double l0 = girsanov_loglik(p, th, ker);
    const double bn = innovation_drift(p, th, ker).b_values[n];
    p.values.push_back(p.values.back());
    const double l1 = girsanov_loglik(p, th, ker);
    EXPECT_NEAR(l1 - l0, -0.5 * bn * bn * delta, 1e-12 * std::max(1.0, std::abs(l0)));
}

TEST(Girsanov, TruthBeatsShiftedAlpha) {
    const double H = 0.8, a = 2.0, delta = 0.01;
    const std::size_t n = 2000;
    const InnovationKernel ker(H, delta, n, 64, false);
    const CirculantSampler s(n, H, delta);
    int wins = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        const auto p = build_ou_path(s.sample(derive_replication_seed(61, r)), a);
        wins += girsanov_loglik(p, ThetaParams(a, H), ker) > girsanov_loglik(p, ThetaParams(a + 1, H), ker);
    }
    EXPECT_GE(wins, 90);
}

TEST(Girsanov, RefinementIsCauchyLike) {
    // same driving noise observed at delta = 0.02, 0.01, 0.005 over T = 10
    const double H = 0.8, a = 2.0, fine = 0.005;
    const std::size_t nf = 2000;
    const CirculantSampler s(nf, H, fine);
    const InnovationKernel k1(H, 0.02, 500, 64, false), k2(H, 0.01, 1000, 64, false), k4(H, 0.005, 2000, 64, false);
    double d12 = 0.0, d24 = 0.0;
    for (std::uint64_t r = 0; r < 10; ++r) {
        const auto inc = s.sample(derive_replication_seed(71, r));
        const ThetaParams th(a, H);
        const double l1 = girsanov_loglik(build_ou_path(inc, a, 4), th, k1);
        const double l2 = girsanov_loglik(build_ou_path(inc, a, 2), th, k2);
        const double l4 = girsanov_loglik(build_ou_path(inc, a, 1), th, k4);
        d12 += std::abs(l2 - l1);
        d24 += std::abs(l4 - l2);
    }
    EXPECT_LT(d24, d12);
}

TEST(Mle, GuardsAndDeterminism) {
    SamplePath big;
    big.delta = 0.001;
    big.values.assign(4002, 0.0);
    big.values[5] = 1.0;
    EXPECT_THROW(mle_continuous(big, ThetaParams(1.0, 0.85), 10), DomainError);

    const auto p = sim_path(2.0, 0.8, 0.05, 200, 4);
    const auto a = mle_continuous(p, ThetaParams(1.0, 0.85), 200);
    const auto b = mle_continuous(p, ThetaParams(1.0, 0.85), 200);
    EXPECT_EQ(a.theta_hat.alpha, b.theta_hat.alpha);
    EXPECT_EQ(a.theta_hat.hurst, b.theta_hat.hurst);
    EXPECT_EQ(a.objective, b.objective);
    // the objective is the negative log-likelihood
    const double at_init = girsanov_loglik(p, ThetaParams(1.0, 0.85), InnovationKernel(0.85, 0.05, 200, 64, false));
    EXPECT_GE(-a.objective, at_init);
}

TEST(Mle, MonteCarloBands) {
    const double H = 0.8, a = 2.0, delta = 0.01;
    const std::size_t n = 2000, reps = 20;
    const CirculantSampler s(n, H, delta);
    double ma = 0.0, mh = 0.0;
    int converged = 0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        const auto e = mle_continuous(build_ou_path(s.sample(derive_replication_seed(404, r)), a), ThetaParams(1.0, 0.85), 300);
        converged += e.converged;
        ma += e.theta_hat.alpha / double(reps);
        mh += e.theta_hat.hurst / double(reps);
    }
    EXPECT_EQ(converged, int(reps));
    EXPECT_GE(ma, 1.5);
    EXPECT_LE(ma, 2.5);
    EXPECT_GE(mh, 0.74);
    EXPECT_LE(mh, 0.88);
}

TEST(EmpiricalFisher, StructureAndAlphaEntry) {
    const auto E = empirical_fisher(ThetaParams(2.0, 0.8), 20.0, 0.05, 200, 13);
    EXPECT_EQ(E[1], E[2]);
    EXPECT_GT(E[0], 0.0);
    EXPECT_GE(E[0] * E[3] - E[1] * E[2], 0.0);
    EXPECT_NEAR(E[3], 0.25, 0.2 * 0.25);
    EXPECT_THROW(empirical_fisher(ThetaParams(2.0, 0.8), 20.0, 0.01, 10, 1), DomainError);
    const auto E3 = empirical_fisher(ThetaParams(2.0, 0.8), 5.0, 0.05, 6, 13, 3);
    const auto E1 = empirical_fisher(ThetaParams(2.0, 0.8), 5.0, 0.05, 6, 13, 1);
    EXPECT_EQ(E3, E1);
}
