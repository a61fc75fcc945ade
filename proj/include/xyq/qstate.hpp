#pragma once

// Two-site density matrix in the computational product basis {00, 01, 10, 11}.
//
// States built from a CorrelatorSet are X-shaped: populated only on the
// diagonal and anti-diagonal. Their spectra come from two closed-form 2x2
// blocks; states adopted from raw matrices take the generic Eigen path.
// X-structure is tracked by construction provenance, never detected by
// inspecting matrix elements.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <string>

#include "xyq/correlators.hpp"
#include "xyq/errors.hpp"

namespace xyq {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

enum class Side { A, B };

inline Matrix2 pauli_x() { return (Matrix2() << 0, 1, 1, 0).finished(); }
inline Matrix2 pauli_y() { return (Matrix2() << 0, Complex(0, -1), Complex(0, 1), 0).finished(); }
inline Matrix2 pauli_z() { return (Matrix2() << 1, 0, 0, -1).finished(); }

inline Matrix4 kron(const Matrix2& a, const Matrix2& b) {
    Matrix4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

// Eigenvalue below which a construction is rejected as non-positive.
inline constexpr double kPsdFloor = -1e-9;

class SingleQubitState {
public:
    SingleQubitState() : m_(Matrix2::Identity() * 0.5) {}
    explicit SingleQubitState(const Matrix2& m) : m_(m) {}

    const Matrix2& matrix() const { return m_; }

    std::array<double, 2> eigenvalues() const {
        const double a = m_(0, 0).real();
        const double d = m_(1, 1).real();
        const double h = 0.5 * (a - d);
        const double disc = std::sqrt(h * h + std::norm(m_(0, 1)));
        const double mean = 0.5 * (a + d);
        return {mean + disc, mean - disc};
    }

private:
    Matrix2 m_;
};

namespace detail {

// Eigenvalues of one 2x2 block {d_lo, d_hi, off-diagonal corner}.
inline std::array<double, 2> block_eigs(double d0, double d1, const Complex& corner) {
    const double mean = 0.5 * (d0 + d1);
    const double h = 0.5 * (d0 - d1);
    const double disc = std::sqrt(h * h + std::norm(corner));
    return {mean + disc, mean - disc};
}

inline std::array<double, 4> x_eigenvalues(const Matrix4& m) {
    const auto outer = block_eigs(m(0, 0).real(), m(3, 3).real(), m(0, 3));
    const auto inner = block_eigs(m(1, 1).real(), m(2, 2).real(), m(1, 2));
    std::array<double, 4> ev{outer[0], outer[1], inner[0], inner[1]};
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

inline std::array<double, 4> generic_eigenvalues(const Matrix4& m) {
    Eigen::SelfAdjointEigenSolver<Matrix4> es(m, Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    std::array<double, 4> ev{v(3), v(2), v(1), v(0)};
    return ev;
}

} // namespace detail

class TwoQubitState {
public:
    // Correlator-built X structure: diagonal {(1+2mz+tzz)/4, (1-tzz)/4, (1-tzz)/4,
    // (1-2mz+tzz)/4}, corner [(txx-tyy) - 2i txy]/4, inner (txx+tyy)/4.
    static TwoQubitState from_correlators(const CorrelatorSet& cs) {
        Matrix4 m = Matrix4::Zero();
        m(0, 0) = 0.25 * (1.0 + 2.0 * cs.mz + cs.tzz);
        m(1, 1) = 0.25 * (1.0 - cs.tzz);
        m(2, 2) = 0.25 * (1.0 - cs.tzz);
        m(3, 3) = 0.25 * (1.0 - 2.0 * cs.mz + cs.tzz);
        m(0, 3) = 0.25 * Complex(cs.txx - cs.tyy, -2.0 * cs.txy);
        m(3, 0) = std::conj(m(0, 3));
        m(1, 2) = 0.25 * (cs.txx + cs.tyy);
        m(2, 1) = m(1, 2);
        TwoQubitState s(m, true);
        const double min_ev = detail::x_eigenvalues(m)[3];
        if (min_ev < kPsdFloor) {
            std::ostringstream os;
            os << "build_state: minimum eigenvalue " << min_ev
               << " below " << kPsdFloor << " (quadrature tolerance too loose?)";
            throw NotPositive(os.str());
        }
        return s;
    }

    // Adopt a raw matrix (testing and dephasing path); no X fast path, no checks.
    static TwoQubitState from_matrix(const Matrix4& m) { return TwoQubitState(m, false); }

    const Matrix4& matrix() const { return m_; }
    bool x_shaped() const { return x_shaped_; }

private:
    TwoQubitState(const Matrix4& m, bool x_shaped) : m_(m), x_shaped_(x_shaped) {}

    Matrix4 m_;
    bool x_shaped_;
};

// Two-site density matrix assembled from a correlator set.
inline TwoQubitState build_state(const CorrelatorSet& cs) {
    return TwoQubitState::from_correlators(cs);
}

// Real spectrum, descending. X-shaped states use the closed-form blocks.
inline std::array<double, 4> eigenvalues(const TwoQubitState& s) {
    return s.x_shaped() ? detail::x_eigenvalues(s.matrix())
                        : detail::generic_eigenvalues(s.matrix());
}

// Shannon entropy of a spectrum, in bits. Eigenvalues in [kPsdFloor, 0) are
// clamped to zero; the spectrum is renormalized if its sum drifted by more
// than 1e-10.
inline double entropy(std::span<const double> spectrum) {
    double sum = 0.0;
    for (double ev : spectrum) {
        if (ev < kPsdFloor) {
            std::ostringstream os;
            os << "entropy: eigenvalue " << ev << " below " << kPsdFloor;
            throw InvalidSpectrum(os.str());
        }
        sum += std::max(ev, 0.0);
    }
    const double scale = (std::abs(sum - 1.0) > 1e-10) ? 1.0 / sum : 1.0;
    double h = 0.0;
    for (double ev : spectrum) {
        const double p = std::max(ev, 0.0) * scale;
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

inline double entropy(const TwoQubitState& s) {
    const auto ev = eigenvalues(s);
    return entropy(std::span<const double>(ev));
}

inline double entropy(const SingleQubitState& s) {
    const auto ev = s.eigenvalues();
    return entropy(std::span<const double>(ev));
}

// Partial trace over the discarded qubit.
inline SingleQubitState reduced_state(const TwoQubitState& s, Side keep) {
    const Matrix4& m = s.matrix();
    Matrix2 r;
    if (keep == Side::A) {
        r(0, 0) = m(0, 0) + m(1, 1);
        r(0, 1) = m(0, 2) + m(1, 3);
        r(1, 0) = m(2, 0) + m(3, 1);
        r(1, 1) = m(2, 2) + m(3, 3);
    } else {
        r(0, 0) = m(0, 0) + m(2, 2);
        r(0, 1) = m(0, 1) + m(2, 3);
        r(1, 0) = m(1, 0) + m(3, 2);
        r(1, 1) = m(1, 1) + m(3, 3);
    }
    return SingleQubitState(r);
}

// Result of transposing one subsystem's indices. Deliberately not a
// TwoQubitState: it can fail positivity and is consumed only by the
// entanglement measures.
struct PartialTranspose {
    Matrix4 m;
    bool x_shaped;
};

inline PartialTranspose partial_transpose(const TwoQubitState& s, Side side = Side::A) {
    const Matrix4& m = s.matrix();
    Matrix4 out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp) {
                    const int row = 2 * a + b, col = 2 * ap + bp;
                    // transpose the chosen subsystem's indices
                    const int src_row = (side == Side::A) ? 2 * ap + b : 2 * a + bp;
                    const int src_col = (side == Side::A) ? 2 * a + bp : 2 * ap + b;
                    out(row, col) = m(src_row, src_col);
                }
    // For X states the corner and inner anti-diagonal entries swap blocks,
    // so the transposed matrix is X-shaped again.
    return {out, s.x_shaped()};
}

inline std::array<double, 4> eigenvalues(const PartialTranspose& pt) {
    return pt.x_shaped ? detail::x_eigenvalues(pt.m) : detail::generic_eigenvalues(pt.m);
}

struct StateDiagnostics {
    double hermiticity_defect; // max |m - m^dagger| element
    double trace_defect;       // |tr m - 1|
    double min_eigenvalue;     // of the Hermitian part, generic solver
    double x_shape_defect;     // max |element| off the diagonal and anti-diagonal
    bool within(double tol) const {
        return hermiticity_defect <= tol && trace_defect <= tol &&
               min_eigenvalue >= -tol && x_shape_defect <= tol;
    }
};

inline StateDiagnostics validate(const TwoQubitState& s) {
    const Matrix4& m = s.matrix();
    StateDiagnostics d{};
    d.hermiticity_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    d.trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
    const Matrix4 herm = 0.5 * (m + m.adjoint());
    d.min_eigenvalue = detail::generic_eigenvalues(herm)[3];
    d.x_shape_defect = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j && i + j != 3)
                d.x_shape_defect = std::max(d.x_shape_defect, std::abs(m(i, j)));
    return d;
}

} // namespace xyq
