#include "mfou/nystrom.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "mfou/errors.hpp"
#include "mfou/kernels.hpp"
#include "mfou/quadrature.hpp"

namespace mfou {

namespace {

// graded toward both ends: x^4 on [0, 1/2], mirrored cubic on [1/2, 1]
std::vector<double> graded_mesh(int m) {
    const int n0 = m / 2;
    const int n1 = m - n0;
    std::vector<double> x(std::size_t(m) + 1);
    for (int i = 0; i <= n0; ++i) x[i] = 0.5 * std::pow(double(i) / n0, 4.0);
    for (int i = 1; i <= n1; ++i) x[n0 + i] = 1.0 - 0.5 * std::pow(double(n1 - i) / n1, 3.0);
    x[m] = 1.0;
    return x;
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// x^{q} (log x / q - 1/q^2), the antiderivative of x^{q-1} log x; 0 at x = 0
double xlog_anti(double x, double q) {
    if (x <= 0.0) return 0.0;
    return std::pow(x, q) * (std::log(x) / q - 1.0 / (q * q));
}

boost::math::quadrature::tanh_sinh<double>& ts_integrator() {
    thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
    return ts;
}

}  // namespace

PowerKernel PowerKernel::fractional(double H) {
    if (!(H > 0.75 && H < 1.0)) throw DomainError("Fredholm kernel requires hurst in (3/4, 1)");
    return {H * (2.0 * H - 1.0), 2.0 * H - 2.0, H};
}

double PowerKernel::operator()(double tau) const {
    if (tau == 0.0 && beta < 0.0) throw SingularArgument("kernel at tau = 0");
    return coef * std::pow(std::abs(tau), beta);
}

UnitFredholm::UnitFredholm(const PowerKernel& kernel, int m, bool with_dH)
    : k_(kernel), m_(m), with_dH_(with_dH && kernel.is_fractional()) {
    if (m < 16) throw DomainError("Nystrom grid needs m >= 16");
    if (!(kernel.beta > -1.0 && kernel.beta <= 0.0)) throw DomainError("kernel exponent must lie in (-1, 0]");
    enriched_ = kernel.beta < 0.0;
    gamma_ = 2.0 * kernel.beta + 1.0;
    N_ = m + 1 + (enriched_ ? 1 : 0);
    x_ = graded_mesh(m);
    colloc_ = x_;
    if (enriched_) colloc_.push_back(0.5 * x_[1]);
    assemble();
}

double UnitFredholm::k1(double x) const { return k_.coef * std::pow(x, k_.beta); }

void UnitFredholm::kernel_row(double x, double* row, double* drow) const {
    const double b1 = k_.beta + 1.0;
    const double b2 = k_.beta + 2.0;
    auto E0 = [&](double v) { return sgn(v) * std::pow(std::abs(v), b1) / b1; };
    auto E1 = [&](double v) { return std::pow(std::abs(v), b2) / b2; };
    auto E0L = [&](double v) { return sgn(v) * xlog_anti(std::abs(v), b1); };
    auto E1L = [&](double v) { return xlog_anti(std::abs(v), b2); };

    for (int j = 0; j <= m_; ++j) {
        row[j] = 0.0;
        if (drow) drow[j] = 0.0;
    }
    for (int i = 0; i < m_; ++i) {
        const double a = x_[i], b = x_[i + 1], h = b - a;
        const double dist = std::max({a - x, x - b, 0.0});
        if (dist > 2.0 * h) {
            const double c = 0.5 * (a + b), hh = 0.5 * h;
            for (int q = 0; q < 4; ++q) {
                for (int s = -1; s <= 1; s += 2) {
                    const double y = c + s * hh * kGl8x[q];
                    const double ad = std::abs(y - x);
                    const double w = std::pow(ad, k_.beta) * hh * kGl8w[q];
                    row[i] += w * (b - y) / h;
                    row[i + 1] += w * (y - a) / h;
                    if (drow) {
                        const double wl = w * std::log(ad);
                        drow[i] += wl * (b - y) / h;
                        drow[i + 1] += wl * (y - a) / h;
                    }
                }
            }
        } else {
            const double va = a - x, vb = b - x;
            const double M0 = E0(vb) - E0(va);
            const double M1 = E1(vb) - E1(va);
            row[i] += ((b - x) * M0 - M1) / h;
            row[i + 1] += (M1 + (x - a) * M0) / h;
            if (drow) {
                const double L0 = E0L(vb) - E0L(va);
                const double L1 = E1L(vb) - E1L(va);
                drow[i] += ((b - x) * L0 - L1) / h;
                drow[i + 1] += (L1 + (x - a) * L0) / h;
            }
        }
    }
}

UnitFredholm::Moments3 UnitFredholm::power_moments(double x, double p, bool with_logs) const {
    const double be = k_.beta;
    Moments3 r{0.0, 0.0, 0.0};
    if (x > 0.0) {
        // int_0^x (x-y)^beta y^p dy in closed form; logs by differentiating the Beta function
        const double base = std::pow(x, be + p + 1.0) * std::tgamma(be + 1.0) * std::tgamma(p + 1.0) /
                            std::tgamma(be + p + 2.0);
        r.plain += base;
        if (with_logs) {
            const double lx = std::log(x), psi_all = digamma(be + p + 2.0);
            r.log_diff += base * (lx + digamma(be + 1.0) - psi_all);
            r.log_y += base * (lx + digamma(p + 1.0) - psi_all);
        }
    }
    if (x < 1.0) {
        const double s = 1.0 - x;
        const double pre = std::pow(s, be + 1.0);
        auto& ts = ts_integrator();
        auto f0 = [&](double v) { return std::pow(v, be) * std::pow(x + s * v, p); };
        r.plain += pre * ts.integrate(f0, 0.0, 1.0, 1e-12);
        if (with_logs) {
            auto fd = [&](double v) { return std::pow(v, be) * std::pow(x + s * v, p) * std::log(s * v); };
            auto fy = [&](double v) {
                const double y = x + s * v;
                return std::pow(v, be) * std::pow(y, p) * std::log(y);
            };
            r.log_diff += pre * ts.integrate(fd, 0.0, 1.0, 1e-12);
            r.log_y += pre * ts.integrate(fy, 0.0, 1.0, 1e-12);
        }
    }
    return r;
}

void UnitFredholm::assemble() {
    const int N = N_;
    const int R = int(colloc_.size());
    const double c = k_.coef;
    const double H = k_.hurst;
    const double dc = 4.0 * H - 1.0;  // d/dH of H(2H-1)

    P_ = Eigen::MatrixXd::Zero(R, N);
    Q_ = Eigen::MatrixXd::Zero(R, N);
    F_ = Eigen::VectorXd::Zero(R);
    if (with_dH_) {
        dP_ = Eigen::MatrixXd::Zero(R, N);
        dQ_ = Eigen::MatrixXd::Zero(R, N);
        dF_ = Eigen::VectorXd::Zero(R);
    }
    std::vector<double> row(std::size_t(m_) + 1), drow(std::size_t(m_) + 1);
    for (int i = 0; i < R; ++i) {
        const double x = colloc_[i];
        if (i <= m_) {
            P_(i, i) = 1.0;
        } else {  // first-cell midpoint
            P_(i, 0) = 0.5;
            P_(i, 1) = 0.5;
        }
        kernel_row(x, row.data(), with_dH_ ? drow.data() : nullptr);
        for (int j = 0; j <= m_; ++j) Q_(i, j) = c * row[j];
        if (with_dH_)
            for (int j = 0; j <= m_; ++j) dQ_(i, j) = dc * row[j] + 2.0 * c * drow[j];

        const auto fm = power_moments(x, k_.beta, with_dH_);
        F_(i) = c * c * fm.plain;
        if (with_dH_) dF_(i) = 2.0 * c * dc * fm.plain + c * c * (2.0 * fm.log_diff + 2.0 * fm.log_y);

        if (enriched_) {
            const int a = m_ + 1;
            P_(i, a) = std::pow(x, gamma_);
            const auto em = power_moments(x, gamma_, with_dH_);
            Q_(i, a) = c * em.plain;
            if (with_dH_) {
                dP_(i, a) = x > 0.0 ? 4.0 * std::log(x) * std::pow(x, gamma_) : 0.0;
                dQ_(i, a) = dc * em.plain + c * (2.0 * em.log_diff + 4.0 * em.log_y);
            }
        }
    }
    Plu_ = P_.partialPivLu();
}

UnitFredholm::Coeffs UnitFredholm::solve(double t, bool with_dH, double* rcond) const {
    if (!(t > 0.0)) throw DomainError("horizon must be positive");
    if (with_dH && !with_dH_) throw DomainError("H-derivative not assembled for this kernel");
    const double mu = std::pow(t, k_.beta + 1.0);
    // At the nodes x^gamma equals its hat interpolant, so the raw enrichment column is
    // nearly collinear with the hats. Solve for nodal values of Phi and the enrichment
    // x^gamma - I_h x^gamma instead, with unit column norms; u is recovered afterwards.
    Eigen::MatrixXd A = P_ + mu * Q_;
    if (enriched_)
        for (int i = 0; i <= m_; ++i) A.col(m_ + 1) -= std::pow(x_[i], gamma_) * A.col(i);
    const Eigen::VectorXd cs = A.colwise().norm().cwiseInverse().transpose();
    A = A * cs.asDiagonal();
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (rcond) *rcond = lu.rcond();
    auto back = [&](const Eigen::VectorXd& rhs) {
        Eigen::VectorXd v = cs.cwiseProduct(lu.solve(rhs));
        if (enriched_)
            for (int i = 0; i <= m_; ++i) v(i) -= std::pow(x_[i], gamma_) * v(m_ + 1);
        return v;
    };
    Coeffs c;
    c.u = back(mu * F_);
    if (with_dH) {
        const double mu_H = 2.0 * std::log(t) * mu;
        const Eigen::VectorXd r = mu_H * F_ + mu * dF_ - (dP_ + mu * dQ_ + mu_H * Q_) * c.u;
        c.du = back(r);
    }
    return c;
}

void UnitFredholm::prepare_fast() {
    if (fast_) return;
    const Eigen::MatrixXd M = Plu_.solve(Q_);
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw ConditioningError("eigendecomposition failed", 0.0);
    V_ = es.eigenvectors();
    d_ = es.eigenvalues();
    const Eigen::PartialPivLU<Eigen::MatrixXcd> Vlu(V_);
    const Eigen::MatrixXcd Pinv = Plu_.inverse().cast<std::complex<double>>();
    S_ = Vlu.solve(Pinv);
    y_ = S_ * F_.cast<std::complex<double>>();
    fast_ = true;
}

UnitFredholm::Coeffs UnitFredholm::solve_fast(double t, bool with_dH) const {
    if (!fast_) throw DomainError("prepare_fast() has not been called");
    if (with_dH && !with_dH_) throw DomainError("H-derivative not assembled for this kernel");
    const double mu = std::pow(t, k_.beta + 1.0);
    const Eigen::VectorXcd inv = (Eigen::VectorXcd::Ones(N_) + mu * d_).cwiseInverse();
    Coeffs c;
    c.u = (V_ * (mu * y_.cwiseProduct(inv))).real();
    if (with_dH) {
        const double mu_H = 2.0 * std::log(t) * mu;
        const Eigen::VectorXd r = mu_H * F_ + mu * dF_ - (dP_ * c.u + mu * (dQ_ * c.u) + mu_H * (Q_ * c.u));
        const Eigen::VectorXcd z = S_ * r.cast<std::complex<double>>();
        c.du = (V_ * z.cwiseProduct(inv)).real();
    }
    return c;
}

double UnitFredholm::phi(double x, const Coeffs& c) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    int i = int(it - x_.begin()) - 1;
    i = std::clamp(i, 0, m_ - 1);
    const double h = x_[i + 1] - x_[i];
    const double w = (x - x_[i]) / h;
    double v = (1.0 - w) * c.u(i) + w * c.u(i + 1);
    if (enriched_) v += c.u(m_ + 1) * std::pow(x, gamma_);
    return v;
}

double UnitFredholm::dphi(double x, const Coeffs& c) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    int i = int(it - x_.begin()) - 1;
    i = std::clamp(i, 0, m_ - 1);
    const double h = x_[i + 1] - x_[i];
    const double w = (x - x_[i]) / h;
    double v = (1.0 - w) * c.du(i) + w * c.du(i + 1);
    if (enriched_) {
        const double xg = std::pow(x, gamma_);
        v += c.du(m_ + 1) * xg;
        if (x > 0.0) v += c.u(m_ + 1) * 4.0 * std::log(x) * xg;
    }
    return v;
}

template <class EdgeFn>
void UnitFredholm::integrate_cells(std::size_t count, EdgeFn&& edge, const Coeffs& c, bool with_dH,
                                   std::vector<CellIntegral>& out) const {
    const double b1 = k_.beta + 1.0, g1 = gamma_ + 1.0;
    const double coef = k_.coef;
    const double dc = 4.0 * k_.hurst - 1.0;
    // x^q (log x / q - 1/q^2) from precomputed pieces
    auto xlog = [](double xq, double logx, double q) {
        return xq == 0.0 ? 0.0 : xq * (logx / q - 1.0 / (q * q));
    };

    // cumulative integrals of the hat part at the nodes
    thread_local std::vector<double> cu, cdu;
    cu.assign(x_.size(), 0.0);
    cdu.assign(x_.size(), 0.0);
    for (int i = 0; i < m_; ++i) {
        const double h = x_[i + 1] - x_[i];
        cu[i + 1] = cu[i] + 0.5 * h * (c.u(i) + c.u(i + 1));
        if (with_dH) cdu[i + 1] = cdu[i] + 0.5 * h * (c.du(i) + c.du(i + 1));
    }
    const double ua = enriched_ ? c.u(m_ + 1) : 0.0;
    const double dua = (enriched_ && with_dH) ? c.du(m_ + 1) : 0.0;

    int cell = 0;
    // antiderivatives of G and dG/dH at an edge
    auto anti = [&](const EdgePoint& e, double& G, double& dG) {
        const double x = e.x;
        while (cell < m_ - 1 && x > x_[cell + 1]) ++cell;
        const double h = x_[cell + 1] - x_[cell];
        const double s = x - x_[cell];
        const double hat = cu[cell] + c.u(cell) * s + (c.u(cell + 1) - c.u(cell)) * s * s / (2.0 * h);
        const double en = enriched_ ? ua * e.xg1 / g1 : 0.0;
        G = coef * e.xb1 / b1 - hat - en;
        if (with_dH) {
            const double dhat =
                cdu[cell] + c.du(cell) * s + (c.du(cell + 1) - c.du(cell)) * s * s / (2.0 * h);
            const double dk1 = dc * e.xb1 / b1 + 2.0 * coef * xlog(e.xb1, e.logx, b1);
            const double den = enriched_ ? dua * e.xg1 / g1 + 4.0 * ua * xlog(e.xg1, e.logx, g1) : 0.0;
            dG = dk1 - dhat - den;
        }
    };

    out.resize(count);
    double Gp = 0.0, dGp = 0.0;
    anti(edge(0), Gp, dGp);
    for (std::size_t i = 0; i < count; ++i) {
        double G = 0.0, dG = 0.0;
        anti(edge(i + 1), G, dG);
        out[i] = {G - Gp, dG - dGp};
        Gp = G;
        dGp = dG;
    }
}

std::vector<UnitFredholm::CellIntegral> UnitFredholm::cell_integrals(
    const std::vector<double>& edges, const Coeffs& c, bool with_dH) const {
    const double b1 = k_.beta + 1.0, g1 = gamma_ + 1.0;
    std::vector<CellIntegral> out;
    if (edges.size() < 2) return out;
    auto edge = [&](std::size_t i) {
        const double x = edges[i];
        return EdgePoint{x, std::pow(x, b1), std::pow(x, g1), x > 0.0 ? std::log(x) : 0.0};
    };
    integrate_cells(edges.size() - 1, edge, c, with_dH, out);
    return out;
}

UnitFredholm::UniformPowers UnitFredholm::uniform_powers(std::size_t n) const {
    const double b1 = k_.beta + 1.0, g1 = gamma_ + 1.0;
    UniformPowers pw;
    pw.pb1.resize(n + 1);
    pw.pg1.resize(n + 1);
    pw.logl.resize(n + 1);
    for (std::size_t l = 0; l <= n; ++l) {
        const double v = double(l);
        pw.pb1[l] = std::pow(v, b1);
        pw.pg1[l] = std::pow(v, g1);
        pw.logl[l] = l > 0 ? std::log(v) : 0.0;
    }
    return pw;
}

void UnitFredholm::uniform_cell_integrals(std::size_t k, const UniformPowers& pw, const Coeffs& c,
                                          bool with_dH, std::vector<CellIntegral>& out) const {
    if (k == 0 || k >= pw.pb1.size()) throw ShapeError("uniform_cell_integrals: k out of range");
    const double b1 = k_.beta + 1.0, g1 = gamma_ + 1.0;
    const double kb = std::pow(double(k), -b1), kg = std::pow(double(k), -g1);
    const double lk = std::log(double(k)), inv = 1.0 / double(k);
    auto edge = [&](std::size_t l) {
        return EdgePoint{double(l) * inv, pw.pb1[l] * kb, pw.pg1[l] * kg, pw.logl[l] - lk};
    };
    integrate_cells(k, edge, c, with_dH, out);
}

double UnitFredholm::residual(double x, double t, const Coeffs& c) const {
    const double mu = std::pow(t, k_.beta + 1.0);
    std::vector<double> row(std::size_t(m_) + 1);
    kernel_row(x, row.data(), nullptr);
    double kphi = 0.0;
    for (int j = 0; j <= m_; ++j) kphi += k_.coef * row[j] * c.u(j);
    if (enriched_) kphi += k_.coef * power_moments(x, gamma_, false).plain * c.u(m_ + 1);
    const double F1 = k_.coef * k_.coef * power_moments(x, k_.beta, false).plain;
    return mu * F1 - phi(x, c) - mu * kphi;
}

}  // namespace mfou
