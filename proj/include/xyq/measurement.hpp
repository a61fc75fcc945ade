#pragma once

// Rank-1 projective measurement bases on one qubit, parametrized by Bloch
// angles. The second vector is the orthonormal completion
//   |i2> = -e^{-i phi} sin(theta/2)|0> + cos(theta/2)|1>,
// which keeps P1 + P2 = I for every (theta, phi).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "xyq/qstate.hpp"

namespace xyq {

struct MeasurementBasis {
    double theta = 0.0; // [0, pi]
    double phi = 0.0;   // [0, 2 pi)
};

inline std::array<Eigen::Vector2cd, 2> basis_vectors(const MeasurementBasis& b) {
    const double ct = std::cos(0.5 * b.theta);
    const double st = std::sin(0.5 * b.theta);
    const Complex eip = std::polar(1.0, b.phi);
    Eigen::Vector2cd v1, v2;
    v1 << ct, eip * st;
    v2 << -std::conj(eip) * st, ct;
    return {v1, v2};
}

inline std::array<Matrix2, 2> projectors(const MeasurementBasis& b) {
    const auto v = basis_vectors(b);
    return {Matrix2(v[0] * v[0].adjoint()), Matrix2(v[1] * v[1].adjoint())};
}

// Map an unconstrained optimizer iterate back to theta in [0, pi],
// phi in [0, 2 pi); (theta, phi) and (2 pi - theta, phi + pi) define the same
// projector pair.
inline MeasurementBasis canonical_basis(double theta, double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    if (theta > std::numbers::pi) {
        theta = two_pi - theta;
        phi += std::numbers::pi;
    }
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    return {theta, phi};
}

} // namespace xyq
