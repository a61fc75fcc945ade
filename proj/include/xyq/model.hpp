#pragma once

// Dimensionless quench parameters of the infinite anisotropic XY chain.
// The transverse field is a at t = 0 and zero afterwards; a_tilde = a/J and
// t_tilde = J t / hbar absorb the coupling and hbar.

#include <cmath>
#include <stdexcept>

namespace xyq {

struct ModelParams {
    double gamma;   // anisotropy, in (0, 1]; gamma = 1 is the Ising chain
    double a_tilde; // initial transverse field (any real; 0 is stationary)
    double t_tilde; // evolution time, >= 0
};

inline void validate(const ModelParams& p) {
    if (!(p.gamma > 0.0) || !(p.gamma <= 1.0))
        throw std::invalid_argument("ModelParams: gamma must be in (0, 1]");
    if (!(p.t_tilde >= 0.0))
        throw std::invalid_argument("ModelParams: t_tilde must be >= 0");
    if (!std::isfinite(p.a_tilde))
        throw std::invalid_argument("ModelParams: a_tilde must be finite");
}

// Quasiparticle dispersion sqrt(gamma^2 sin^2 phi + (x - cos phi)^2).
// Vanishes only at phi = 0 (x = 1) and phi = pi (x = -1).
inline double dispersion(double x, double phi, double gamma) {
    const double s = gamma * std::sin(phi);
    const double c = x - std::cos(phi);
    return std::sqrt(s * s + c * c);
}

} // namespace xyq
