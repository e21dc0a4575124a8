#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mfou {

struct MixedIncrements {
    double delta = 0.0;
    double hurst = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> values;  // Delta M_1 .. Delta M_n
};

struct SamplePath {
    double delta = 0.0;
    double x0 = 0.0;
    std::vector<double> values;  // X_0 .. X_n on t = k*delta

    std::size_t size() const { return values.size(); }
    double horizon() const { return delta * static_cast<double>(values.size() - 1); }
};

// Eigenvalues of the 2n circulant that embeds the increment covariance.
std::vector<double> embedding_eigenvalues(std::size_t n, double H, double delta);

// Covariance matrix (row-major n x n) that the embedding actually produces,
// after clamping of tiny negative eigenvalues.
std::vector<double> embedding_covariance(std::size_t n, double H, double delta);

// Exact Gaussian sampler for n mixed fractional noise increments. The
// embedding is computed once; sample() may be called concurrently.
class CirculantSampler {
public:
    CirculantSampler(std::size_t n, double H, double delta);
    MixedIncrements sample(std::uint64_t seed) const;

    std::size_t size() const { return n_; }
    double min_eigenvalue() const { return min_eig_; }

private:
    std::size_t n_;
    double H_;
    double delta_;
    double min_eig_;
    std::vector<double> scale_;  // sqrt(lambda_j / 2n)
};

MixedIncrements simulate_mixed_increments(std::size_t n, double H, double delta,
                                          std::uint64_t seed);

// X_{k+1} = exp(-alpha*dt) X_k + Delta M_{k+1} on the increment grid, subsampled
// by refine; the first burn_in coarse points are dropped.
SamplePath build_ou_path(const MixedIncrements& inc, double alpha, int refine = 1,
                         std::size_t burn_in = 0);

std::uint64_t derive_replication_seed(std::uint64_t master, std::uint64_t replication);

}  // namespace mfou
