#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "xyq/qstate.hpp"

using namespace xyq;
using Catch::Approx;

namespace {

// Pauli-sum route to the correlator-built matrix, a structural cross-check of
// the explicit-entry constructor.
Matrix4 pauli_sum(const CorrelatorSet& cs) {
    const Matrix2 id = Matrix2::Identity();
    Matrix4 m = kron(id, id);
    m += cs.mz * (kron(pauli_z(), id) + kron(id, pauli_z()));
    m += cs.txy * (kron(pauli_x(), pauli_y()) + kron(pauli_y(), pauli_x()));
    m += cs.txx * kron(pauli_x(), pauli_x());
    m += cs.tyy * kron(pauli_y(), pauli_y());
    m += cs.tzz * kron(pauli_z(), pauli_z());
    return 0.25 * m;
}

} // namespace

TEST_CASE("build_state reference cases", "[qstate]") {
    SECTION("all-zero correlators give the maximally mixed state") {
        const auto s = build_state({0.0, 0.0, 0.0, 0.0, 0.0});
        CHECK((s.matrix() - Matrix4::Identity() * 0.25).cwiseAbs().maxCoeff() < 1e-15);
    }
    SECTION("polarized correlators give the up-up projector") {
        const auto s = build_state({1.0, 0.0, 0.0, 1.0, 0.0});
        Matrix4 expect = Matrix4::Zero();
        expect(0, 0) = 1.0;
        CHECK((s.matrix() - expect).cwiseAbs().maxCoeff() < 1e-15);
    }
    SECTION("Bell correlators give the Phi+ projector") {
        const auto s = build_state({0.0, 1.0, -1.0, 1.0, 0.0});
        CHECK((s.matrix() - oracle::bell_phi_plus().matrix()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("explicit entries agree with the Pauli decomposition", "[qstate]") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto cs = oracle::random_correlator_set(rng);
        const auto s = build_state(cs);
        CHECK((s.matrix() - pauli_sum(cs)).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(s.matrix()(1, 1).real() == Approx(0.25 * (1.0 - cs.tzz)).margin(1e-15));
        CHECK(s.matrix()(2, 2).real() == Approx(0.25 * (1.0 - cs.tzz)).margin(1e-15));
        CHECK(std::abs(s.matrix()(1, 2).imag()) < 1e-15);
    }
}

TEST_CASE("build_state rejects non-positive constructions", "[qstate]") {
    // a polarized set with correlator noise of the kind loose quadrature
    // produces: the composed state dips below the PSD floor
    CorrelatorSet cs{1.0, 2e-4, -2e-4, 0.0, 0.0};
    cs.tzz = cs.mz * cs.mz - cs.txx * cs.tyy + cs.txy * cs.txy;
    CHECK_THROWS_AS(build_state(cs), NotPositive);
}

TEST_CASE("closed-form spectrum matches the generic solver", "[qstate]") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const auto s = build_state(oracle::random_correlator_set(rng));
        const auto fast = eigenvalues(s);
        const auto ref = oracle::hermitian_eigenvalues(s.matrix());
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) {
            CHECK(fast[k] == Approx(ref[k]).margin(1e-10));
            sum += fast[k];
        }
        CHECK(sum == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("spectrum reference cases", "[qstate]") {
    const auto mixed = eigenvalues(oracle::maximally_mixed());
    for (double ev : mixed) CHECK(ev == Approx(0.25).margin(1e-15));
    const auto bell = eigenvalues(oracle::bell_phi_plus());
    CHECK(bell[0] == Approx(1.0).margin(1e-15));
    CHECK(bell[1] == Approx(0.0).margin(1e-15));
    CHECK(bell[3] == Approx(0.0).margin(1e-15));
}

TEST_CASE("entropy of spectra", "[qstate]") {
    CHECK(entropy(oracle::bell_phi_plus()) == Approx(0.0).margin(1e-12));
    CHECK(entropy(oracle::maximally_mixed()) == Approx(2.0).margin(1e-12));
    const double half[] = {0.5, 0.5, 0.0, 0.0};
    CHECK(entropy(std::span<const double>(half)) == Approx(1.0).margin(1e-15));

    SECTION("clamping and renormalization") {
        const double noisy[] = {0.6, 0.4 + 3e-10, -4e-10, 0.0};
        CHECK(entropy(std::span<const double>(noisy)) ==
              Approx(-0.6 * std::log2(0.6) - 0.4 * std::log2(0.4)).margin(1e-8));
    }
    SECTION("a genuinely negative eigenvalue is rejected") {
        const double bad[] = {0.7, 0.4, -0.1, 0.0};
        CHECK_THROWS_AS(entropy(std::span<const double>(bad)), InvalidSpectrum);
    }
}

TEST_CASE("reduced states", "[qstate]") {
    SECTION("Bell reductions are maximally mixed") {
        for (Side side : {Side::A, Side::B}) {
            const auto r = reduced_state(oracle::bell_phi_plus(), side);
            CHECK((r.matrix() - Matrix2::Identity() * 0.5).cwiseAbs().maxCoeff() < 1e-15);
        }
    }
    SECTION("product projector reduces to the qubit projector") {
        const auto s = build_state({1.0, 0.0, 0.0, 1.0, 0.0});
        const auto r = reduced_state(s, Side::B);
        CHECK(r.matrix()(0, 0).real() == Approx(1.0).margin(1e-15));
        CHECK(std::abs(r.matrix()(0, 1)) < 1e-15);
    }
    SECTION("both sites of a correlator state carry the same reduction") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 30; ++i) {
            const auto s = build_state(oracle::random_correlator_set(rng));
            const auto ra = reduced_state(s, Side::A);
            const auto rb = reduced_state(s, Side::B);
            CHECK((ra.matrix() - rb.matrix()).cwiseAbs().maxCoeff() < 1e-14);
        }
        const auto cs = correlator_set({0.5, 2.0, 1.0});
        const auto r = reduced_state(build_state(cs), Side::A);
        CHECK(r.matrix()(0, 0).real() == Approx(0.5 * (1.0 + cs.mz)).margin(1e-12));
        CHECK(r.matrix()(1, 1).real() == Approx(0.5 * (1.0 - cs.mz)).margin(1e-12));
        CHECK(std::abs(r.matrix()(0, 1)) < 1e-14);
    }
}

TEST_CASE("partial transpose structure", "[qstate]") {
    SECTION("product states stay positive") {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 30; ++i) {
            const auto s = oracle::random_product_state(rng);
            for (Side side : {Side::A, Side::B}) {
                const auto ev = eigenvalues(partial_transpose(s, side));
                CHECK(ev[3] > -1e-12);
            }
        }
    }
    SECTION("Bell corner moves and yields -1/2") {
        const auto pt = partial_transpose(oracle::bell_phi_plus(), Side::A);
        const auto ev = eigenvalues(pt);
        CHECK(ev[3] == Approx(-0.5).margin(1e-14));
        CHECK((pt.m - pt.m.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    }
    SECTION("X-state fast path equals the generic solver on the transpose") {
        std::mt19937_64 rng(13);
        for (int i = 0; i < 300; ++i) {
            const auto s = build_state(oracle::random_correlator_set(rng));
            for (Side side : {Side::A, Side::B}) {
                const auto pt = partial_transpose(s, side);
                const auto fast = eigenvalues(pt);
                const auto ref = oracle::hermitian_eigenvalues(pt.m);
                for (int k = 0; k < 4; ++k) CHECK(fast[k] == Approx(ref[k]).margin(1e-10));
            }
        }
    }
}

TEST_CASE("diagnostics report defects without mutating", "[qstate]") {
    SECTION("maximally mixed state is spotless") {
        const auto d = validate(oracle::maximally_mixed());
        CHECK(d.hermiticity_defect == Approx(0.0).margin(1e-15));
        CHECK(d.trace_defect == Approx(0.0).margin(1e-15));
        CHECK(d.min_eigenvalue == Approx(0.25).margin(1e-12));
        CHECK(d.x_shape_defect == Approx(0.0).margin(1e-15));
        CHECK(d.within(1e-9));
    }
    SECTION("pipeline state passes at 1e-9") {
        const auto d = validate(build_state(correlator_set({0.5, 2.0, 1.0})));
        CHECK(d.hermiticity_defect < 1e-9);
        CHECK(d.trace_defect < 1e-9);
        CHECK(d.min_eigenvalue > -1e-9);
        CHECK(d.x_shape_defect < 1e-9);
    }
    SECTION("a non-Hermitian perturbation is reported at its own size") {
        Matrix4 m = Matrix4::Identity() * 0.25;
        m(0, 1) += Complex(0.0, 1e-3);
        const auto d = validate(TwoQubitState::from_matrix(m));
        CHECK(d.hermiticity_defect == Approx(1e-3).margin(1e-12));
    }
}
