#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace mfou {

// K(tau) = coef * |tau|^beta
struct PowerKernel {
    double coef = 0.0;
    double beta = 0.0;
    double hurst = 0.0;  // 0 when the kernel is not K_H

    static PowerKernel fractional(double H);
    static PowerKernel constant(double c) { return {c, 0.0, 0.0}; }
    bool is_fractional() const { return hurst > 0.0; }
    double operator()(double tau) const;
};

// The Fredholm equation g(s) + int_0^t K(r-s) g(r) dr = K(s) rescaled to the
// unit interval: with g(s) = t^beta G(s/t) and mu = t^{beta+1},
//     G(x) + mu int_0^1 k(y-x) G(y) dy = k(x),    k = coef |.|^beta.
// Writing G = k - Phi gives Phi + mu K Phi = mu F1 with F1 = K k, whose solution is
// bounded. Phi is discretized by hat functions on a graded mesh plus, for a
// singular kernel, the term a * x^{2 beta + 1} that carries its cusp at 0.
// Collocation at the nodes and the midpoint of the first cell; kernel moments
// are integrated exactly per cell (product integration).
class UnitFredholm {
public:
    UnitFredholm(const PowerKernel& kernel, int m, bool with_dH);

    int cells() const { return m_; }
    int unknowns() const { return N_; }
    bool enriched() const { return enriched_; }
    const PowerKernel& kernel() const { return k_; }
    const std::vector<double>& mesh() const { return x_; }

    struct Coeffs {
        Eigen::VectorXd u;   // hat coefficients at the mesh nodes, then the enrichment weight
        Eigen::VectorXd du;  // total H-derivative along mu = t^{2H-1}, empty unless requested
    };

    // direct LU solve for one horizon t
    Coeffs solve(double t, bool with_dH, double* rcond = nullptr) const;

    // diagonalize P^{-1}Q once; afterwards solve_fast costs O(N^2) per horizon
    void prepare_fast();
    Coeffs solve_fast(double t, bool with_dH) const;

    // Phi and d/dH Phi at a point of [0, 1]
    double phi(double x, const Coeffs& c) const;
    double dphi(double x, const Coeffs& c) const;

    // int_{xa}^{xb} G(x) dx and its H-derivative at fixed mu (includes the d/dH of k)
    struct CellIntegral {
        double g;
        double dg;
    };
    // Cell integrals over the consecutive intervals [e_i, e_{i+1}] of an increasing edge list.
    std::vector<CellIntegral> cell_integrals(const std::vector<double>& edges, const Coeffs& c,
                                             bool with_dH) const;

    // Powers of l = 0..n used by uniform_cell_integrals, so that edges l/k need no pow calls.
    struct UniformPowers {
        std::vector<double> pb1, pg1, logl;  // l^{beta+1}, l^{gamma+1}, log l
    };
    UniformPowers uniform_powers(std::size_t n) const;

    // cell integrals over [(l-1)/k, l/k], l = 1..k
    void uniform_cell_integrals(std::size_t k, const UniformPowers& pw, const Coeffs& c,
                                bool with_dH, std::vector<CellIntegral>& out) const;

    // Residual of the unit equation at x: mu F1(x) - Phi(x) - mu (K Phi)(x)
    double residual(double x, double t, const Coeffs& c) const;

    // integral of |y-x|^beta y^p over [0,1], and the same with log|y-x| or log y weights
    struct Moments3 {
        double plain, log_diff, log_y;
    };
    Moments3 power_moments(double x, double p, bool with_logs) const;

private:
    struct EdgePoint {
        double x, xb1, xg1, logx;  // x, x^{beta+1}, x^{gamma+1}, log x
    };
    template <class EdgeFn>
    void integrate_cells(std::size_t count, EdgeFn&& edge, const Coeffs& c, bool with_dH,
                         std::vector<CellIntegral>& out) const;

    void assemble();
    // row of int k(y - x) psi_j(y) dy over all hats; optional d/dbeta row
    void kernel_row(double x, double* row, double* drow) const;
    double k1(double x) const;

    PowerKernel k_;
    int m_;
    int N_;
    bool enriched_;
    bool with_dH_;
    double gamma_;  // enrichment exponent 2 beta + 1
    std::vector<double> x_;
    std::vector<double> colloc_;
    Eigen::MatrixXd P_, Q_, dP_, dQ_;
    Eigen::VectorXd F_, dF_;
    Eigen::PartialPivLU<Eigen::MatrixXd> Plu_;

    bool fast_ = false;
    Eigen::MatrixXcd V_;
    Eigen::VectorXcd d_;
    Eigen::MatrixXcd S_;  // V^{-1} P^{-1}
    Eigen::VectorXcd y_;  // S F
};

}  // namespace mfou
