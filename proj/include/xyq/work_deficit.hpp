#pragma once

// One-way quantum work-deficit. Under one-way communication the receiver
// holds the jointly dephased state, so the locally extractable pure qubits
// are N - min_basis S(sum_i P_i rho P_i) and the deficit reduces to
//   Delta = min over dephasing bases of S(dephased rho) - S(rho).

#include <cmath>

#include "xyq/measurement.hpp"
#include "xyq/optimize.hpp"
#include "xyq/qstate.hpp"

namespace xyq {

// Local dephasing sum_i (I x P_i) rho (I x P_i); trace- and PSD-preserving,
// idempotent for a fixed basis. The result loses the X fast path: a dephased
// X state is generally not X-shaped.
inline TwoQubitState dephase(const TwoQubitState& s, const MeasurementBasis& b,
                             Side side = Side::B) {
    const auto proj = projectors(b);
    const Matrix4& m = s.matrix();
    Matrix4 out = Matrix4::Zero();
    for (const auto& p : proj) {
        const Matrix4 sandwich = (side == Side::B) ? kron(Matrix2::Identity(), p)
                                                   : kron(p, Matrix2::Identity());
        out += sandwich * m * sandwich;
    }
    return TwoQubitState::from_matrix(out);
}

struct DeficitResult {
    double deficit;          // qubits
    MeasurementBasis optimal_basis;
    double dephased_entropy; // bits, at the optimal basis
};

inline DeficitResult one_way_deficit(const TwoQubitState& s, Side side = Side::B,
                                     const BasisOptimizerOptions& opts = {}) {
    const double s_in = entropy(s);
    const auto opt = minimize_over_basis(
        [&s, side](double theta, double phi) {
            return entropy(dephase(s, MeasurementBasis{theta, phi}, side));
        },
        opts);
    double deficit = opt.value - s_in;
    double dephased = opt.value;
    if (deficit < 0.0 && deficit > kPsdFloor) { // optimizer noise at separable points
        deficit = 0.0;
        dephased = s_in;
    }
    return {deficit, opt.basis, dephased};
}

} // namespace xyq
