#pragma once

// Negativity and logarithmic negativity from the partial transpose.

#include <array>
#include <cmath>

#include "xyq/qstate.hpp"

namespace xyq {

// Partial-transpose eigenvalues above this (negative) threshold count as
// zero, so separable-state noise cannot fake entanglement and the collapse
// detector sees an exact zero.
inline constexpr double kPtZeroThreshold = -1e-12;

struct EntanglementResult {
    double negativity;     // >= 0
    double log_negativity; // ebits, log2(2 N + 1)
};

// Absolute sum of the negative partial-transpose eigenvalues. Returns exactly
// 0 when every eigenvalue is above kPtZeroThreshold.
inline double negativity(const TwoQubitState& s) {
    const auto ev = eigenvalues(partial_transpose(s, Side::A));
    double neg = 0.0;
    for (double v : ev)
        if (v < kPtZeroThreshold) neg -= v;
    return neg;
}

inline double log_negativity(const TwoQubitState& s) {
    return std::log2(2.0 * negativity(s) + 1.0);
}

inline EntanglementResult entanglement(const TwoQubitState& s) {
    const double n = negativity(s);
    return {n, std::log2(2.0 * n + 1.0)};
}

} // namespace xyq
