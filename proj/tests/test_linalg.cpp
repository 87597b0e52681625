#include <gtest/gtest.h>

#include <random>

#include "mipd/error.hpp"
#include "mipd/linalg.hpp"

using namespace mipd;

namespace {

template <std::size_t D>
Mat<D> random_mat(std::mt19937_64 &gen, double scale) {
    std::normal_distribution<double> n(0.0, scale);
    Mat<D> m;
    for (auto &e : m.a) {
        e = cplx(n(gen), n(gen));
    }
    return m;
}

// exp(m) as lim (I + m/n)^n with n = 2^k, by repeated squaring.
template <std::size_t D>
Mat<D> euler_limit(const Mat<D> &m, int k) {
    Mat<D> x = Mat<D>::identity() + cplx(std::ldexp(1.0, -k)) * m;
    for (int s = 0; s < k; s++) {
        x = x * x;
    }
    return x;
}

}  // namespace

TEST(Linalg, IdentityAndDiag) {
    std::mt19937_64 gen(1);
    const Mat4 m = random_mat<4>(gen, 1.0);
    EXPECT_EQ(Mat4::identity() * m, m);
    EXPECT_EQ(m * Mat4::identity(), m);
    const Mat2 d = Mat2::diag({cplx(2, 1), cplx(-3, 0.5)});
    EXPECT_EQ(d(0, 1), cplx(0));
    EXPECT_EQ(d(1, 1), cplx(-3, 0.5));
}

TEST(Linalg, ProductIsAssociative) {
    std::mt19937_64 gen(2);
    for (int t = 0; t < 20; t++) {
        const Mat4 a = random_mat<4>(gen, 1.0), b = random_mat<4>(gen, 1.0), c = random_mat<4>(gen, 1.0);
        EXPECT_LT(max_abs((a * b) * c - a * (b * c)), 1e-13);
    }
}

TEST(Linalg, TensorMatchesIndexDefinition) {
    std::mt19937_64 gen(3);
    const Mat2 a = random_mat<2>(gen, 1.0), b = random_mat<2>(gen, 1.0);
    const Mat4 t = tensor2(a, b);
    for (int s1p = 0; s1p < 2; s1p++)
        for (int s2p = 0; s2p < 2; s2p++)
            for (int s1 = 0; s1 < 2; s1++)
                for (int s2 = 0; s2 < 2; s2++) {
                    EXPECT_EQ(t(2 * s1p + s2p, 2 * s1 + s2), a(s1p, s1) * b(s2p, s2));
                }
}

TEST(Linalg, TensorIsMultiplicative) {
    std::mt19937_64 gen(4);
    const Mat2 a = random_mat<2>(gen, 1.0), b = random_mat<2>(gen, 1.0);
    const Mat2 c = random_mat<2>(gen, 1.0), d = random_mat<2>(gen, 1.0);
    EXPECT_LT(max_abs(tensor2(a, b) * tensor2(c, d) - tensor2(a * c, b * d)), 1e-13);
}

TEST(Linalg, SolveAndDet) {
    std::mt19937_64 gen(5);
    const Mat4 a = random_mat<4>(gen, 1.0), b = random_mat<4>(gen, 1.0);
    const Mat4 x = solve(a, b);
    EXPECT_LT(max_abs(a * x - b), 1e-12);
    EXPECT_LT(std::abs(det(a * b) - det(a) * det(b)), 1e-11 * std::abs(det(a) * det(b)));
    const Mat2 upper{{cplx(2), cplx(5), cplx(0), cplx(0, 3)}};
    EXPECT_LT(std::abs(det(upper) - cplx(0, 6)), 1e-15);
    EXPECT_THROW(solve(Mat2{}, Mat2::identity()), NumericError);
}

TEST(Linalg, ExpmOfDiagonal) {
    const Mat4 d = Mat4::diag({cplx(0.5, 1), cplx(-3, 0), cplx(0, -7), cplx(12, 2)});
    const Mat4 e = expm(d);
    for (int k = 0; k < 4; k++) {
        EXPECT_LT(std::abs(e(k, k) - std::exp(d(k, k))), 1e-13 * std::abs(std::exp(d(k, k))));
    }
    EXPECT_EQ(expm(Mat2{}), Mat2::identity());
}

TEST(Linalg, ExpmOfNilpotentIsFinite) {
    // Defective input: exp([[0, 1], [0, 0]]) = [[1, 1], [0, 1]].
    const Mat2 n{{cplx(0), cplx(1), cplx(0), cplx(0)}};
    const Mat2 e = expm(n);
    EXPECT_LT(max_abs(e - Mat2{{cplx(1), cplx(1), cplx(0), cplx(1)}}), 1e-15);
    // Jordan block with eigenvalue λ: exp = e^λ [[1, 1], [0, 1]].
    const cplx lam(-0.3, 2.0);
    const Mat2 j{{lam, cplx(1), cplx(0), lam}};
    const Mat2 ej = expm(j);
    EXPECT_LT(std::abs(ej(0, 1) - std::exp(lam)), 1e-14);
}

TEST(Linalg, ExpmMatchesEulerLimit) {
    std::mt19937_64 gen(6);
    for (double scale : {0.05, 0.5, 2.0}) {
        const Mat4 m = random_mat<4>(gen, scale);
        const int k = 20;
        const double n = std::ldexp(1.0, k);
        const double nm = norm_inf(m);
        // (I + m/n)^n differs from exp(m) by at most ~ ||m||² e^{||m||} / n.
        const double bound = 2.0 * nm * nm * std::exp(nm) / n + 1e-9 * std::exp(nm);
        EXPECT_LT(max_abs(expm(m) - euler_limit(m, k)), bound) << "scale " << scale;
    }
}

TEST(Linalg, ExpmInverseAndDeterminant) {
    std::mt19937_64 gen(7);
    for (double scale : {0.01, 0.3, 1.0, 3.0}) {
        const Mat4 m = random_mat<4>(gen, scale);
        const Mat4 e = expm(m), einv = expm(-m);
        EXPECT_LT(max_abs(e * einv - Mat4::identity()), 1e-12 * norm_inf(e) * norm_inf(einv));
        const cplx expected = std::exp(trace(m));
        EXPECT_LT(std::abs(det(e) - expected), 1e-11 * std::abs(expected));
    }
}

TEST(Linalg, ExpmCommutesWithGenerator) {
    std::mt19937_64 gen(8);
    const Mat4 m = random_mat<4>(gen, 2.0);
    const Mat4 e = expm(m);
    EXPECT_LT(max_abs(m * e - e * m), 1e-12 * norm_inf(m) * norm_inf(e));
}

TEST(Linalg, ExpmRejectsHugeOrNonFinite) {
    EXPECT_THROW(expm(Mat2::diag({cplx(800), cplx(0)})), OverflowError);
    EXPECT_THROW(expm(Mat2::diag({cplx(NAN), cplx(0)})), OverflowError);
    EXPECT_THROW(expm(Mat2::diag({cplx(-2e5), cplx(0)})), OverflowError);
    EXPECT_NO_THROW(expm(Mat2::diag({cplx(-600), cplx(600)})));
    // Large but strongly damped: no overflow. For [[a, b], [b, d]] with
    // t = (a+d)/2, h = (a−d)/2, μ = sqrt(h² + b²):
    // e_{11} = ½ e^{t+μ} (1 − h/μ) + ½ e^{t−μ} (1 + h/μ).
    const double a = -900, b = 3, d = -1;
    const Mat2 e = expm(Mat2{{cplx(a), cplx(b), cplx(b), cplx(d)}});
    EXPECT_TRUE(all_finite(e));
    const double t = (a + d) / 2, h = (a - d) / 2, mu = std::sqrt(h * h + b * b);
    const double e11 = 0.5 * std::exp(t + mu) * (1 - h / mu) + 0.5 * std::exp(t - mu) * (1 + h / mu);
    EXPECT_NEAR(e(1, 1).real(), e11, 1e-12);
}

TEST(Linalg, PowerMatchesRepeatedProduct) {
    std::mt19937_64 gen(9);
    const Mat4 m = random_mat<4>(gen, 0.5);
    Mat4 acc = Mat4::identity();
    for (int k = 0; k < 13; k++) {
        acc = acc * m;
    }
    EXPECT_LT(max_abs(power(m, 13) - acc), 1e-13 * max_abs(acc));
    EXPECT_EQ(power(m, 0), Mat4::identity());
}

TEST(Linalg, ExpmMatchesMillionStepEulerProduct) {
    std::mt19937_64 gen(10);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 10; t++) {
        Mat4 m;
        for (auto &e : m.a) {
            // Entries in the unit disk.
            do {
                e = cplx(u(gen), u(gen));
            } while (std::abs(e) > 1.0);
        }
        m = cplx(std::min(1.0, 5.0 / norm_inf(m))) * m;
        const unsigned long long n = 1000000;
        const Mat4 euler = power(Mat4::identity() + cplx(1.0 / n) * m, n);
        const double nm = norm_inf(m);
        EXPECT_LE(norm_inf(expm(m) - euler), 20.0 * nm * nm / n) << "||m|| = " << nm;
    }
}
