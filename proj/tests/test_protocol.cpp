#include <gtest/gtest.h>

#include <numbers>

#include "mipd/error.hpp"
#include "mipd/protocol.hpp"
#include "oracle.hpp"

using namespace mipd;
constexpr double kPi = std::numbers::pi;

TEST(Protocol, RotationIsUnitaryAndAlignsAxis) {
    for (double th : {0.0, 0.4, kPi / 2, 2.9, kPi}) {
        for (double ph : {0.0, 1.0, -2.5}) {
            const Mat2 r = rotation(th, ph);
            EXPECT_LT(max_abs(adjoint(r) * r - Mat2::identity()), 1e-15);
            // R maps the unit vector n(θ, φ) spinor onto |↑⟩ up to a phase.
            const Vec<2> n{cplx(std::cos(th / 2)), std::polar(std::sin(th / 2), ph)};
            const Vec<2> up = r * n;
            EXPECT_NEAR(std::abs(up[0]), 1.0, 1e-15);
            EXPECT_LT(std::abs(up[1]), 1e-15);
        }
    }
}

TEST(Protocol, RotationExamples) {
    EXPECT_LT(max_abs(rotation(0, 0) - Mat2::diag({cplx(1), cplx(-1)})), 1e-16);
    const double h = 1 / std::sqrt(2.0);
    EXPECT_LT(max_abs(rotation(kPi / 2, 0) - Mat2{{cplx(h), cplx(h), cplx(h), cplx(-h)}}), 1e-15);
}

TEST(Protocol, RotationMatchesReference) {
    const oracle::M2 o = oracle::rot(1.1, 0.7);
    const Mat2 r = rotation(1.1, 0.7);
    EXPECT_LT(std::abs(r(0, 0) - o.a) + std::abs(r(0, 1) - o.b) + std::abs(r(1, 0) - o.c) + std::abs(r(1, 1) - o.d),
              1e-15);
}

TEST(Protocol, BackactionExamples) {
    const KrausPair k = kraus_backaction(0.0, 0.0, 10);
    EXPECT_EQ(k.m0, Mat2::identity());
    EXPECT_EQ(max_abs(k.m1), 0.0);
    const KrausPair z = kraus_backaction(2.0, 1.0, 4);
    EXPECT_LT(std::abs(z.m0(1, 1) - std::exp(cplx(-1.0, -0.5))), 1e-15);
    EXPECT_NEAR(z.m1(1, 1).real(), std::sqrt(1 - std::exp(-2.0)), 1e-15);
    // Very weak measurement keeps full relative precision in the jump branch.
    const KrausPair w = kraus_backaction(1e-12, 0.0, 1000);
    EXPECT_NEAR(w.m1(1, 1).real(), std::sqrt(4e-15), 1e-22);
}

TEST(Protocol, KrausCompleteness) {
    for (double c : {0.0, 0.3, 2.0, 40.0}) {
        for (int n : {1, 7, 100}) {
            const Measurement m{c, -1.3, 2.2, Direction::Backward};
            for (int k = 1; k <= n; k += std::max(1, n / 5)) {
                const Mat2 k0 = kraus_full(k, 0, m, n), k1 = kraus_full(k, 1, m, n);
                EXPECT_LT(max_abs(adjoint(k0) * k0 + adjoint(k1) * k1 - Mat2::identity()), 1e-14)
                    << "C=" << c << " N=" << n << " k=" << k;
            }
        }
    }
}

TEST(Protocol, KrausMatchesReference) {
    const Measurement m{1.7, 0.6, 0.9, Direction::Backward};
    for (int k = 1; k <= 5; k++) {
        for (int r = 0; r < 2; r++) {
            const oracle::M2 o = oracle::kraus(k, r, 1.7, 0.6, 0.9, -1, 5);
            const Mat2 x = kraus_full(k, r, m, 5);
            EXPECT_LT(std::abs(x(0, 0) - o.a) + std::abs(x(0, 1) - o.b) + std::abs(x(1, 0) - o.c) +
                          std::abs(x(1, 1) - o.d),
                      1e-14);
        }
    }
}

TEST(Protocol, AxisAzimuth) {
    EXPECT_NEAR(axis_azimuth(1, 3, Direction::Forward), kPi / 2, 1e-15);
    EXPECT_NEAR(axis_azimuth(3, 3, Direction::Backward), -3 * kPi / 2, 1e-15);
}

TEST(Protocol, DeltaRotationIsStepIndependent) {
    const Measurement m{1.0, 0.5, 1.2, Direction::Forward};
    const int n = 9;
    const Mat2 dr = delta_rotation(m, n);
    for (int k = 0; k <= n; k++) {
        EXPECT_LT(max_abs(delta_rotation_at(m, n, k) - dr), 1e-14) << "k=" << k;
    }
}

TEST(Protocol, DeltaRotationClosesTheLoop) {
    for (Direction d : {Direction::Forward, Direction::Backward}) {
        for (int n : {1, 4, 31}) {
            const Measurement m{0.0, 0.0, 0.8, d};
            EXPECT_LT(max_abs(power(delta_rotation(m, n), n + 1) - Mat2::identity()), 1e-13) << "N=" << n;
        }
    }
}

TEST(Protocol, InitialAndRejectedStates) {
    const Vec<2> up = initial_state(0.0);
    EXPECT_EQ(up[0], cplx(1));
    EXPECT_EQ(up[1], cplx(0));
    const Vec<2> p = initial_state(kPi / 2), q = rejected_state(kPi / 2);
    EXPECT_NEAR(p[0].real(), std::sqrt(0.5), 1e-16);
    EXPECT_LT(std::abs(std::conj(p[0]) * q[0] + std::conj(p[1]) * q[1]), 1e-16);
    // ψ0 is the +1/2 eigenstate of n0·σ, n0 = (sinθ, 0, cosθ).
    const double th = 2.1;
    const Vec<2> s = initial_state(th);
    const cplx a = std::cos(th) * s[0] + std::sin(th) * s[1];
    const cplx b = std::sin(th) * s[0] - std::cos(th) * s[1];
    EXPECT_LT(std::abs(a - s[0]) + std::abs(b - s[1]), 1e-15);
}

TEST(Protocol, ValidationErrors) {
    EXPECT_THROW((Measurement{-0.1, 0, 1, Direction::Forward}.validate()), UsageError);
    EXPECT_THROW((Measurement{1, 0, 3.5, Direction::Forward}.validate()), UsageError);
    EXPECT_THROW((Measurement{1, NAN, 1, Direction::Forward}.validate()), UsageError);
    EXPECT_NO_THROW((Measurement{0, -5, kPi, Direction::Backward}.validate()));
    EXPECT_THROW(direction_from_int(0), UsageError);
    EXPECT_EQ(direction_from_int(-1), Direction::Backward);
    ProtocolParams p{Measurement{1, 0, 1, Direction::Forward}, FiniteSteps{0}};
    EXPECT_THROW(p.validate(), UsageError);
    p.steps = Asymptotic{};
    EXPECT_THROW(p.step_count(), UsageError);
}

TEST(Protocol, BackactionLimits) {
    // Projective limit.
    const KrausPair p = kraus_backaction(1e3, 0.7, 1);
    EXPECT_LT(max_abs(p.m0 - Mat2::diag({cplx(1), cplx(0)})), 1e-15);
    EXPECT_LT(max_abs(p.m1 - Mat2::diag({cplx(0), cplx(1)})), 1e-15);
    // e^{−4C/N} = 1/2.
    const KrausPair h = kraus_backaction(std::log(2.0) / 2, 0.0, 2);
    EXPECT_NEAR(h.m1(1, 1).real(), 1 / std::sqrt(2.0), 1e-15);
}

TEST(Protocol, StatesAlongTheAxis) {
    const Measurement m{1.3, 0.4, 1.0, Direction::Forward};
    const int n = 6, k = 2;
    // ±n_k spinors: R_k† |↑⟩ and R_k† |↓⟩.
    const Mat2 rdag = adjoint(rotation(m.theta, axis_azimuth(k, n, m.direction)));
    const Vec<2> plus = rdag * Vec<2>{cplx(1), cplx(0)};
    const Vec<2> minus = rdag * Vec<2>{cplx(0), cplx(1)};
    auto n2 = [](const Vec<2> &v) { return std::norm(v[0]) + std::norm(v[1]); };
    const Vec<2> kept = kraus_full(k, 0, m, n) * plus;
    EXPECT_NEAR(n2(kept), 1.0, 1e-15);
    EXPECT_LT(std::abs(kept[0] - plus[0]) + std::abs(kept[1] - plus[1]), 1e-15);
    EXPECT_NEAR(n2(kraus_full(k, 0, m, n) * minus), std::exp(-4 * 1.3 / n), 1e-15);
    EXPECT_NEAR(n2(kraus_full(k, 1, m, n) * minus), 1 - std::exp(-4 * 1.3 / n), 1e-15);
}

TEST(Protocol, DeltaRotationAtPole) {
    // R(0, φ) = diag(1, −e^{−iφ}), so consecutive axes differ by
    // diag(1, e^{−iΔφ}).
    for (Direction d : {Direction::Forward, Direction::Backward}) {
        const int n = 7;
        const double dphi = 2 * kPi * sign(d) / (n + 1);
        const Mat2 dr = delta_rotation({0.5, 0.1, 0.0, d}, n);
        EXPECT_LT(max_abs(dr - Mat2::diag({cplx(1), std::polar(1.0, -dphi)})), 1e-15);
    }
}
