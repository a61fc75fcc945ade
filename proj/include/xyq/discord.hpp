#pragma once

// Quantum mutual information, measurement-optimized classical correlations,
// and quantum discord. The measurement acts on side B by default; the side is
// a parameter so the site symmetry of the quenched state can be checked
// rather than assumed.

#include <array>
#include <cmath>

#include "xyq/measurement.hpp"
#include "xyq/optimize.hpp"
#include "xyq/qstate.hpp"

namespace xyq {

// Measurement branches below this probability contribute nothing downstream.
inline constexpr double kBranchFloor = 1e-12;

struct ConditionalEnsemble {
    std::array<double, 2> probs;
    std::array<SingleQubitState, 2> states; // maximally mixed placeholder when the branch is empty
};

// Post-measurement ensemble on the unmeasured qubit:
//   p_i = tr[(I x P_i) rho],  rho_{|i} = tr_meas[(I x P_i) rho (I x P_i)] / p_i.
inline ConditionalEnsemble conditional_ensemble(const TwoQubitState& s,
                                                const MeasurementBasis& b,
                                                Side measured = Side::B) {
    const auto vecs = basis_vectors(b);
    const Matrix4& m = s.matrix();
    ConditionalEnsemble out;
    for (int i = 0; i < 2; ++i) {
        const auto& v = vecs[i];
        Matrix2 cond = Matrix2::Zero();
        for (int k = 0; k < 2; ++k)
            for (int kp = 0; kp < 2; ++kp) {
                // contraction over the measured subsystem's index pair
                Complex acc = 0.0;
                for (int mle = 0; mle < 2; ++mle)
                    for (int mre = 0; mre < 2; ++mre) {
                        const int row = (measured == Side::B) ? 2 * k + mle : 2 * mle + k;
                        const int col = (measured == Side::B) ? 2 * kp + mre : 2 * mre + kp;
                        acc += std::conj(v(mle)) * v(mre) * m(row, col);
                    }
                cond(k, kp) = acc;
            }
        const double p = std::max(cond.trace().real(), 0.0);
        out.probs[i] = p;
        out.states[i] = (p >= kBranchFloor) ? SingleQubitState(Matrix2(cond / p))
                                            : SingleQubitState();
    }
    return out;
}

// Ensemble-averaged entropy sum p_i S(rho_{|i}) for a fixed basis (the
// pre-minimization value).
inline double conditional_entropy(const TwoQubitState& s, const MeasurementBasis& b,
                                  Side measured = Side::B) {
    const auto ens = conditional_ensemble(s, b, measured);
    double h = 0.0;
    for (int i = 0; i < 2; ++i)
        if (ens.probs[i] >= kBranchFloor) h += ens.probs[i] * entropy(ens.states[i]);
    return h;
}

// I = S(rho_A) + S(rho_B) - S(rho_AB), in bits.
inline double mutual_information(const TwoQubitState& s) {
    return entropy(reduced_state(s, Side::A)) + entropy(reduced_state(s, Side::B)) - entropy(s);
}

struct ClassicalCorrelations {
    double value; // J, bits
    MeasurementBasis basis;
};

// J = S(rho_kept) - min over bases of the conditional entropy.
inline ClassicalCorrelations classical_correlations(const TwoQubitState& s,
                                                    Side measured = Side::B,
                                                    const BasisOptimizerOptions& opts = {}) {
    const Side kept = (measured == Side::B) ? Side::A : Side::B;
    const double s_kept = entropy(reduced_state(s, kept));
    const auto opt = minimize_over_basis(
        [&s, measured](double theta, double phi) {
            return conditional_entropy(s, MeasurementBasis{theta, phi}, measured);
        },
        opts);
    return {s_kept - opt.value, opt.basis};
}

struct DiscordResult {
    double mutual_info;    // I, bits
    double classical_corr; // J, bits
    double discord;        // Q = I - J, bits
    MeasurementBasis optimal_basis;
};

inline DiscordResult discord(const TwoQubitState& s, Side measured = Side::B,
                             const BasisOptimizerOptions& opts = {}) {
    const double mi = mutual_information(s);
    auto cc = classical_correlations(s, measured, opts);
    double q = mi - cc.value;
    if (q < 0.0 && q > kPsdFloor) { // clamp optimizer noise, keeping Q = I - J exact
        q = 0.0;
        cc.value = mi;
    }
    return {mi, cc.value, q, cc.basis};
}

} // namespace xyq
