#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <vector>

namespace mfou {

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    bool converged = false;
    int intervals = 0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// Kronrod 15 / Gauss 7
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T, class F>
T gk15(F&& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T rk = fc * kWgk[7];
    T rg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        rk += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) rg += (f1 + f2) * kWg[j / 2];
    }
    err = magnitude((rk - rg) * h);
    return rk * h;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod on [a, b]; bisects the worst interval until
// the summed error estimate is below max(abs_tol, rel_tol*|I|) or the budget runs out.
template <class T, class F>
QuadResult<T> integrate_gk(F&& f, double a, double b, double abs_tol, double rel_tol,
                           int max_intervals = 2000) {
    struct Piece {
        double a, b;
        T value;
        double err;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    std::priority_queue<Piece> heap;
    double e0 = 0.0;
    T v0 = detail::gk15<T>(f, a, b, e0);
    heap.push({a, b, v0, e0});
    T total = v0;
    double err = e0;
    int count = 1;
    while (count < max_intervals) {
        if (err <= std::max(abs_tol, rel_tol * detail::magnitude(total))) break;
        Piece p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {
            heap.push(p);
            break;
        }
        double el = 0.0, er = 0.0;
        T vl = detail::gk15<T>(f, p.a, m, el);
        T vr = detail::gk15<T>(f, m, p.b, er);
        heap.push({p.a, m, vl, el});
        heap.push({m, p.b, vr, er});
        ++count;
        total = total - p.value + vl + vr;
        err = err - p.err + el + er;
    }
    // running totals drift after many updates; re-sum in order
    T sum{};
    double esum = 0.0;
    std::vector<Piece> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
    for (const auto& p : all) {
        sum += p.value;
        esum += p.err;
    }
    QuadResult<T> r;
    r.value = sum;
    r.error = esum;
    r.intervals = count;
    r.converged = esum <= std::max(abs_tol, rel_tol * detail::magnitude(sum));
    return r;
}

// Integrate over consecutive breakpoints, splitting the absolute tolerance evenly.
template <class T, class F>
QuadResult<T> integrate_gk_pieces(F&& f, const std::vector<double>& breaks, double abs_tol,
                                  double rel_tol, int max_intervals_each = 2000) {
    QuadResult<T> out;
    out.converged = true;
    const double share = abs_tol / std::max<std::size_t>(1, breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        auto r = integrate_gk<T>(f, breaks[i], breaks[i + 1], share, rel_tol, max_intervals_each);
        out.value += r.value;
        out.error += r.error;
        out.intervals += r.intervals;
        out.converged = out.converged && r.converged;
    }
    return out;
}

// 8-point Gauss-Legendre on [-1, 1]
inline constexpr std::array<double, 4> kGl8x = {0.183434642495649804939476142360184,
                                                0.525532409916328985817739049189246,
                                                0.796666477413626739591553936475830,
                                                0.960289856497536231683560868569473};
inline constexpr std::array<double, 4> kGl8w = {0.362683783378361982965150449277196,
                                                0.313706645877887287337962201986601,
                                                0.222381034453374470544355994426241,
                                                0.101228536290376259152531354309962};

}  // namespace mfou
