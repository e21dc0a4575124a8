#include "mfou/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfou/errors.hpp"

namespace mfou {

namespace {

using Pt = std::array<double, 2>;

Pt lerp(const Pt& a, const Pt& b, double t) {  // a + t (b - a)
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

double dist(const Pt& a, const Pt& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Pt&)>& f, Pt start, double radius,
                             double xtol, int max_iterations) {
    NelderMeadResult res;
    std::array<Pt, 3> p = {start, Pt{start[0] + radius, start[1]}, Pt{start[0], start[1] + radius}};
    std::array<double, 3> fp{};
    for (int i = 0; i < 3; ++i) fp[i] = f(p[i]);
    res.evaluations = 3;

    auto order = [&] {
        std::array<int, 3> idx = {0, 1, 2};
        // stable on ties so the run is reproducible
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fp[a] < fp[b]; });
        std::array<Pt, 3> q;
        std::array<double, 3> fq;
        for (int i = 0; i < 3; ++i) {
            q[i] = p[idx[i]];
            fq[i] = fp[idx[i]];
        }
        p = q;
        fp = fq;
    };

    order();
    while (true) {
        const double diam = std::max(dist(p[0], p[1]), dist(p[0], p[2]));
        if (diam < xtol) {
            res.converged = true;
            break;
        }
        if (res.iterations >= max_iterations) break;
        ++res.iterations;

        const Pt c = lerp(p[0], p[1], 0.5);  // centroid of the two best
        const Pt xr = lerp(c, p[2], -1.0);
        const double fr = f(xr);
        ++res.evaluations;
        if (fr < fp[0]) {
            const Pt xe = lerp(c, p[2], -2.0);
            const double fe = f(xe);
            ++res.evaluations;
            if (fe < fr) {
                p[2] = xe;
                fp[2] = fe;
            } else {
                p[2] = xr;
                fp[2] = fr;
            }
        } else if (fr < fp[1]) {
            p[2] = xr;
            fp[2] = fr;
        } else {
            const bool outside = fr < fp[2];
            const Pt xc = outside ? lerp(c, xr, 0.5) : lerp(c, p[2], 0.5);
            const double fc = f(xc);
            ++res.evaluations;
            if (fc < (outside ? fr : fp[2])) {
                p[2] = xc;
                fp[2] = fc;
            } else {
                for (int i = 1; i < 3; ++i) {
                    p[i] = lerp(p[0], p[i], 0.5);
                    fp[i] = f(p[i]);
                    ++res.evaluations;
                }
            }
        }
        order();
    }
    res.x = p[0];
    res.fx = fp[0];
    return res;
}

ThetaParams theta_from_uv(double u, double v) {
    return ThetaParams(std::exp(u), 0.75 + 0.25 / (1.0 + std::exp(-v)));
}

std::array<double, 2> uv_from_theta(const ThetaParams& theta) {
    return {std::log(theta.alpha), std::log((theta.hurst - 0.75) / (1.0 - theta.hurst))};
}

TransformedFit minimize_over_domain(const std::function<double(const ThetaParams&)>& objective,
                                    const ThetaParams& init, int max_iterations, bool prescan) {
    const double inf = std::numeric_limits<double>::infinity();
    auto g = [&](const Pt& uv) {
        const double a = std::exp(uv[0]);
        const double H = 0.75 + 0.25 / (1.0 + std::exp(-uv[1]));
        if (!ThetaParams::valid(a, H)) return inf;
        const double val = objective(ThetaParams(a, H));
        return std::isnan(val) ? inf : val;
    };

    Pt start = uv_from_theta(ThetaParams(init.alpha, init.hurst));
    double fstart = g(start);
    const double f_init = fstart;
    if (prescan) {
        for (int i = 0; i < 5; ++i) {
            const double a = 0.2 * std::pow(25.0, i / 4.0);
            for (int j = 0; j < 5; ++j) {
                const double H = 0.76 + 0.23 * j / 4.0;
                const Pt uv = uv_from_theta(ThetaParams(a, H));
                const double val = g(uv);
                if (val < fstart) {
                    fstart = val;
                    start = uv;
                }
            }
        }
    }
    const auto nm = nelder_mead(g, start, 0.3, 1e-6, max_iterations);
    if (!std::isfinite(nm.fx)) throw DegenerateData("objective is not finite anywhere on the start simplex");
    TransformedFit out;
    out.theta = theta_from_uv(nm.x[0], nm.x[1]);
    out.objective = nm.fx;
    out.objective_at_init = f_init;
    out.iterations = nm.iterations;
    out.converged = nm.converged;
    return out;
}

}  // namespace mfou
