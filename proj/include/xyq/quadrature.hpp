#pragma once

// Adaptive composite Gauss-Legendre quadrature on [0, pi].
//
// The rule is open (all nodes interior), so integrands whose quotient form is
// 0/0 at an endpoint -- the dispersion zero at the critical field -- are never
// evaluated there. Each panel is estimated with orders n and 2n; panels that
// miss the local tolerance are bisected until the budget runs out.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "xyq/errors.hpp"

namespace xyq {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 512;
    int base_order = 64; // nodes per panel
};

inline void validate(const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
    if (spec.max_subdivisions < 1)
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    if (spec.base_order < 1)
        throw std::invalid_argument("QuadratureSpec: base_order must be >= 1");
}

namespace detail {

struct GaussRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

// Newton iteration on the Legendre polynomial, seeded with the Chebyshev
// approximation to the roots.
inline GaussRule make_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

inline const GaussRule& gauss_rule(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(make_gauss_rule(n));
    return *slot;
}

template <std::size_t N, class F>
std::array<double, N> panel_sum(F&& f, double a, double b, const GaussRule& rule) {
    std::array<double, N> acc{};
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const std::array<double, N> v = f(mid + hw * rule.nodes[i]);
        for (std::size_t k = 0; k < N; ++k) acc[k] += rule.weights[i] * v[k];
    }
    for (std::size_t k = 0; k < N; ++k) acc[k] *= hw;
    return acc;
}

} // namespace detail

// Integrate an integrand returning N components over [0, pi] in one pass,
// sharing every node evaluation between the components. The panel is accepted
// only when all components meet the locally scaled tolerance.
template <std::size_t N, class F>
std::array<double, N> integrate_bz_components(F&& f, const QuadratureSpec& spec) {
    validate(spec);
    const double total = std::numbers::pi;
    const auto& lo = detail::gauss_rule(spec.base_order);
    const auto& hi = detail::gauss_rule(2 * spec.base_order);

    struct Panel {
        double a, b;
    };
    std::vector<Panel> stack{{0.0, total}};
    std::array<double, N> result{};
    int subdivisions = 0;

    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const auto coarse = detail::panel_sum<N>(f, p.a, p.b, lo);
        const auto fine = detail::panel_sum<N>(f, p.a, p.b, hi);
        bool ok = true;
        for (std::size_t k = 0; k < N; ++k) {
            const double err = std::abs(fine[k] - coarse[k]);
            const double tol = std::max(spec.abs_tol * (p.b - p.a) / total,
                                        spec.rel_tol * std::abs(fine[k]));
            if (err > tol) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (std::size_t k = 0; k < N; ++k) result[k] += fine[k];
            continue;
        }
        if (++subdivisions > spec.max_subdivisions)
            throw ConvergenceFailure(
                "integrate_bz: error estimate not met after " +
                std::to_string(spec.max_subdivisions) +
                " subdivisions (evolution time too large for this spec?)");
        const double mid = 0.5 * (p.a + p.b);
        stack.push_back({mid, p.b}); // left half processed first
        stack.push_back({p.a, mid});
    }
    return result;
}

// Scalar Brillouin-zone integral over [0, pi].
template <class F>
double integrate_bz(F&& f, const QuadratureSpec& spec) {
    auto wrapped = [&f](double phi) { return std::array<double, 1>{f(phi)}; };
    return integrate_bz_components<1>(wrapped, spec)[0];
}

} // namespace xyq
