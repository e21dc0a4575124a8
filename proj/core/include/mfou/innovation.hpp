#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mfou/estimate.hpp"
#include "mfou/kernels.hpp"
#include "mfou/nystrom.hpp"
#include "mfou/simulate.hpp"

namespace mfou {

struct NystromSolution {
    double horizon_t = 0.0;
    double hurst = 0.0;
    std::vector<double> nodes;      // positive mesh nodes in (0, t]; g is singular at s = 0
    std::vector<double> g_values;   // g(t, s_i; H)
    std::vector<double> dH_values;  // d/dH g(t, s_i; H)
    double residual_sup = 0.0;      // max |residual| at two off-node points per cell
    double condition = 0.0;         // 1 / rcond of the system matrix
};

// Solves g(t,s) + int_0^t K_H(r-s) g(t,r) dr = K_H(s) on (0, t).
NystromSolution solve_g(double t, double H, int m = 512, double tol = 1e-4);

// Same solver with an arbitrary power kernel (coef |tau|^beta, beta in (-1, 0]);
// dH_values are zero unless the kernel is K_H.
NystromSolution solve_g_kernel(const PowerKernel& kernel, double t, int m, double tol);

// Kernel weights for the innovation sums on the grid t_k = k*delta, k = 1..n.
// weight(k, j) multiplies the increment over ((j-1) delta, j delta] in the sum
// at time t_k and equals the average of g(t_k, u) over the lag cell
// u in [(k-j) delta, (k-j+1) delta].
class InnovationKernel {
public:
    InnovationKernel(double H, double delta, std::size_t n, int m = 64, bool with_dH = true);

    // test hook: g = 0
    static InnovationKernel zero(double delta, std::size_t n);

    double hurst() const { return H_; }
    double delta() const { return delta_; }
    std::size_t steps() const { return n_; }
    bool has_dH() const { return with_dH_; }

    double weight(std::size_t k, std::size_t j) const { return w_[offset(k) + j - 1]; }
    double dweight(std::size_t k, std::size_t j) const { return dw_[offset(k) + j - 1]; }

private:
    InnovationKernel() = default;
    static std::size_t offset(std::size_t k) { return (k - 1) * k / 2; }

    double H_ = 0.0;
    double delta_ = 0.0;
    std::size_t n_ = 0;
    bool with_dH_ = false;
    std::vector<double> w_, dw_;
};

struct InnovationProcess {
    double delta = 0.0;
    std::vector<double> b_values;                     // b_{t_k}, k = 0..n
    std::vector<std::pair<double, double>> grad_b;    // (d/dH b, d/dalpha b)
    std::vector<double> bbar_values;                  // innovation Brownian motion at t_k
};

InnovationProcess innovation_drift(const SamplePath& path, const ThetaParams& theta,
                                   const InnovationKernel& kernel);

InnovationProcess reconstruct_innovation(const MixedIncrements& M, const InnovationKernel& kernel);

double girsanov_loglik(const SamplePath& path, const ThetaParams& theta,
                       const InnovationKernel& kernel);

struct MleOptions {
    int nystrom_m = 64;
    std::size_t max_steps = 4000;
};

EstimationResult mle_continuous(const SamplePath& path, const ThetaParams& init, int budget,
                                const MleOptions& opt = {});

// Monte Carlo average of (2/T) sum_{t_k in [T/2, T)} grad b grad b^T delta, order (H, alpha).
Mat2 empirical_fisher(const ThetaParams& theta0, double T, double delta, std::size_t reps,
                      std::uint64_t master_seed, int threads = 1, int nystrom_m = 64);

}  // namespace mfou
