#pragma once

#include <array>
#include <functional>

#include "mfou/kernels.hpp"

namespace mfou {

struct NelderMeadResult {
    std::array<double, 2> x{};
    double fx = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

// Plain Nelder-Mead in two dimensions. Converged when the largest vertex
// distance from the best vertex drops below xtol.
NelderMeadResult nelder_mead(const std::function<double(const std::array<double, 2>&)>& f,
                             std::array<double, 2> start, double radius, double xtol,
                             int max_iterations);

// (u, v) <-> theta with alpha = exp(u), H = 3/4 + (1/4) / (1 + exp(-v))
ThetaParams theta_from_uv(double u, double v);
std::array<double, 2> uv_from_theta(const ThetaParams& theta);

struct TransformedFit {
    ThetaParams theta;
    double objective = 0.0;
    double objective_at_init = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Minimizes objective(theta) over the open parameter domain. The start is the
// best of init and a 5x5 grid over alpha in [0.2, 5] (log) and H in [0.76, 0.99].
// Points that round onto the domain boundary are given +inf without calling objective.
TransformedFit minimize_over_domain(const std::function<double(const ThetaParams&)>& objective,
                                    const ThetaParams& init, int max_iterations,
                                    bool prescan = true);

}  // namespace mfou
