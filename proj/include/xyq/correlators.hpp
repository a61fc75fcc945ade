#pragma once

// Brillouin-zone integrals of the time-evolved two-site correlators.
//
// With lam_a = dispersion(a_tilde, phi, gamma) and lam_0 = dispersion(0, ...),
// the integrands split into four independent pieces sharing all node work:
//
//   A  = (gamma/pi) sin^2(phi) [g2s2 + (c - a)c + a c cos(2 lam_0 t)] / (lam_a lam_0^2)
//   B  = (1/pi) c [{g2s2 + (c - a)c} c - a g2s2 cos(2 lam_0 t)] / (lam_a lam_0^2)
//   S  = -(gamma a / pi) sin^2(phi) sin(2 t lam_0) / (lam_a lam_0)
//   MZ = (1/pi) [cos(2 lam_0 t) g2s2 a - c ((c - a)c + g2s2)] / (lam_a lam_0^2)
//
// where g2s2 = gamma^2 sin^2 phi and c = cos phi. Then G(R) = R*A - B for
// R = +-1 (sin(R phi) = R sin phi), T^xx = G(-1), T^yy = G(+1), T^xy = S,
// and T^zz is composed as (M^z)^2 - G(1)G(-1) + S^2, never integrated.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "xyq/model.hpp"
#include "xyq/quadrature.hpp"

namespace xyq {

struct CorrelatorSet {
    double mz;  // transverse magnetization M^z(t)
    double txx; // G(-1, t)
    double tyy; // G(+1, t)
    double tzz; // composed: mz^2 - txx*tyy + txy^2
    double txy; // S(t), equal to T^yx
};

namespace detail {

// The four shared integrand components {A, B, S, MZ} at one node.
inline std::array<double, 4> bz_integrand(const ModelParams& p, double phi) {
    constexpr double pi = std::numbers::pi;
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const double g2s2 = p.gamma * p.gamma * s * s;
    const double lam_a = std::sqrt(g2s2 + (p.a_tilde - c) * (p.a_tilde - c));
    const double lam_0 = std::sqrt(g2s2 + c * c);
    const double osc_c = std::cos(2.0 * lam_0 * p.t_tilde);
    const double osc_s = std::sin(2.0 * lam_0 * p.t_tilde);
    const double inv_d = 1.0 / (lam_a * lam_0 * lam_0);
    const double core = g2s2 + (c - p.a_tilde) * c;

    const double a_term = (p.gamma / pi) * s * s * (core + p.a_tilde * c * osc_c) * inv_d;
    const double b_term = (1.0 / pi) * c * (core * c - p.a_tilde * g2s2 * osc_c) * inv_d;
    const double s_term = -(p.gamma * p.a_tilde / pi) * s * s * osc_s * inv_d * lam_0;
    const double mz_term = (1.0 / pi) * (osc_c * g2s2 * p.a_tilde - c * ((c - p.a_tilde) * c + g2s2)) * inv_d;
    return {a_term, b_term, s_term, mz_term};
}

} // namespace detail

// G(R, t) for R = +-1.
inline double correlator_g(int r, const ModelParams& p, const QuadratureSpec& spec = {}) {
    if (r != 1 && r != -1)
        throw std::invalid_argument("correlator_g: R must be +1 or -1");
    validate(p);
    const auto ab = integrate_bz_components<2>(
        [&p](double phi) {
            const auto v = detail::bz_integrand(p, phi);
            return std::array<double, 2>{v[0], v[1]};
        },
        spec);
    return r * ab[0] - ab[1];
}

// S(t) = T^xy(t) = T^yx(t).
inline double correlator_s(const ModelParams& p, const QuadratureSpec& spec = {}) {
    validate(p);
    return integrate_bz([&p](double phi) { return detail::bz_integrand(p, phi)[2]; }, spec);
}

// Transverse magnetization M^z(t).
inline double magnetization_z(const ModelParams& p, const QuadratureSpec& spec = {}) {
    validate(p);
    return integrate_bz([&p](double phi) { return detail::bz_integrand(p, phi)[3]; }, spec);
}

// All five correlators from one pass over the zone; the four independent
// integrals share every dispersion evaluation per node.
inline CorrelatorSet correlator_set(const ModelParams& p, const QuadratureSpec& spec = {}) {
    validate(p);
    const auto v = integrate_bz_components<4>(
        [&p](double phi) { return detail::bz_integrand(p, phi); }, spec);
    CorrelatorSet cs;
    cs.mz = v[3];
    cs.txx = -v[0] - v[1]; // G(-1)
    cs.tyy = v[0] - v[1];  // G(+1)
    cs.txy = v[2];
    cs.tzz = cs.mz * cs.mz - cs.txx * cs.tyy + cs.txy * cs.txy;
    return cs;
}

} // namespace xyq
