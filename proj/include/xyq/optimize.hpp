#pragma once

// Measurement-basis minimizer shared by the discord and work-deficit
// measures: a coarse (theta, phi) grid seeds a downhill-simplex refinement.
// The objective is smooth and 2-D, so grid seeding is what guards against
// the local minima; the simplex only polishes. Fully deterministic.

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "xyq/errors.hpp"
#include "xyq/measurement.hpp"

namespace xyq {

struct BasisOptimizerOptions {
    int grid_theta = 32;
    int grid_phi = 32;
    double f_tol = 1e-11;     // absolute spread of simplex values at convergence
    int max_iterations = 500; // refinement budget
};

struct BasisOptimum {
    double value;
    MeasurementBasis basis;
    int iterations;
};

// Minimize f(theta, phi) over the Bloch sphere. f must accept any real pair;
// the returned basis is canonicalized.
template <class F>
BasisOptimum minimize_over_basis(F&& f, const BasisOptimizerOptions& opts = {}) {
    constexpr double pi = std::numbers::pi;

    // Coarse grid; theta includes both poles, phi wraps.
    double best_t = 0.0, best_p = 0.0;
    double best_f = f(0.0, 0.0);
    const double dt = pi / (opts.grid_theta - 1);
    const double dp = 2.0 * pi / opts.grid_phi;
    for (int i = 0; i < opts.grid_theta; ++i) {
        const double theta = i * dt;
        for (int j = 0; j < opts.grid_phi; ++j) {
            const double phi = j * dp;
            const double v = f(theta, phi);
            if (v < best_f) {
                best_f = v;
                best_t = theta;
                best_p = phi;
            }
        }
    }

    // Nelder-Mead from the best cell, vertices offset by half a grid step.
    using Point = std::array<double, 2>;
    std::array<Point, 3> x{Point{best_t, best_p},
                           Point{best_t + 0.5 * dt, best_p},
                           Point{best_t, best_p + 0.5 * dp}};
    std::array<double, 3> fx{best_f, f(x[1][0], x[1][1]), f(x[2][0], x[2][1])};

    auto order = [&] {
        if (fx[0] > fx[1]) { std::swap(fx[0], fx[1]); std::swap(x[0], x[1]); }
        if (fx[1] > fx[2]) { std::swap(fx[1], fx[2]); std::swap(x[1], x[2]); }
        if (fx[0] > fx[1]) { std::swap(fx[0], fx[1]); std::swap(x[0], x[1]); }
    };

    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        order();
        if (fx[2] - fx[0] <= opts.f_tol) break;

        const Point c{0.5 * (x[0][0] + x[1][0]), 0.5 * (x[0][1] + x[1][1])};
        auto at = [&](double scale) {
            return Point{c[0] + scale * (c[0] - x[2][0]), c[1] + scale * (c[1] - x[2][1])};
        };

        const Point xr = at(1.0);
        const double fr = f(xr[0], xr[1]);
        if (fr < fx[0]) {
            const Point xe = at(2.0);
            const double fe = f(xe[0], xe[1]);
            if (fe < fr) { x[2] = xe; fx[2] = fe; }
            else         { x[2] = xr; fx[2] = fr; }
        } else if (fr < fx[1]) {
            x[2] = xr;
            fx[2] = fr;
        } else {
            const Point xc = (fr < fx[2]) ? at(0.5) : at(-0.5);
            const double fc = f(xc[0], xc[1]);
            if (fc < std::min(fr, fx[2])) {
                x[2] = xc;
                fx[2] = fc;
            } else {
                for (int k = 1; k < 3; ++k) {
                    x[k][0] = x[0][0] + 0.5 * (x[k][0] - x[0][0]);
                    x[k][1] = x[0][1] + 0.5 * (x[k][1] - x[0][1]);
                    fx[k] = f(x[k][0], x[k][1]);
                }
            }
        }
    }
    order();
    if (fx[2] - fx[0] > opts.f_tol)
        throw OptimizerFailure("minimize_over_basis: simplex refinement did not converge within " +
                               std::to_string(opts.max_iterations) + " iterations");
    return {fx[0], canonical_basis(x[0][0], x[0][1]), iter};
}

} // namespace xyq
