#include "mipd/linalg.hpp"

#include <cmath>
#include <utility>

#include "mipd/error.hpp"

namespace mipd {

Mat4 tensor2(const Mat2 &a, const Mat2 &b) {
    Mat4 r;
    for (std::size_t s1p = 0; s1p < 2; s1p++) {
        for (std::size_t s2p = 0; s2p < 2; s2p++) {
            for (std::size_t s1 = 0; s1 < 2; s1++) {
                for (std::size_t s2 = 0; s2 < 2; s2++) {
                    r(2 * s1p + s2p, 2 * s1 + s2) = a(s1p, s1) * b(s2p, s2);
                }
            }
        }
    }
    return r;
}

namespace {

// In-place LU with partial pivoting. Returns the permutation sign, or 0 if a
// pivot is exactly zero.
template <std::size_t D>
int lu_decompose(Mat<D> &lu, std::array<std::size_t, D> &perm) {
    int sign = 1;
    for (std::size_t k = 0; k < D; k++) {
        perm[k] = k;
    }
    for (std::size_t col = 0; col < D; col++) {
        std::size_t pivot = col;
        double best = std::abs(lu(col, col));
        for (std::size_t row = col + 1; row < D; row++) {
            if (std::abs(lu(row, col)) > best) {
                best = std::abs(lu(row, col));
                pivot = row;
            }
        }
        if (best == 0.0) {
            return 0;
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < D; j++) {
                std::swap(lu(pivot, j), lu(col, j));
            }
            std::swap(perm[pivot], perm[col]);
            sign = -sign;
        }
        for (std::size_t row = col + 1; row < D; row++) {
            cplx f = lu(row, col) / lu(col, col);
            lu(row, col) = f;
            for (std::size_t j = col + 1; j < D; j++) {
                lu(row, j) -= f * lu(col, j);
            }
        }
    }
    return sign;
}

}  // namespace

template <std::size_t D>
Mat<D> solve(const Mat<D> &den, const Mat<D> &num) {
    Mat<D> lu = den;
    std::array<std::size_t, D> perm{};
    if (lu_decompose(lu, perm) == 0) {
        throw NumericError("solve: singular matrix");
    }
    Mat<D> x;
    for (std::size_t c = 0; c < D; c++) {
        std::array<cplx, D> y{};
        for (std::size_t i = 0; i < D; i++) {
            cplx acc = num(perm[i], c);
            for (std::size_t k = 0; k < i; k++) {
                acc -= lu(i, k) * y[k];
            }
            y[i] = acc;
        }
        for (std::size_t ii = D; ii-- > 0;) {
            cplx acc = y[ii];
            for (std::size_t k = ii + 1; k < D; k++) {
                acc -= lu(ii, k) * x(k, c);
            }
            x(ii, c) = acc / lu(ii, ii);
        }
    }
    return x;
}

template <std::size_t D>
cplx det(const Mat<D> &m) {
    Mat<D> lu = m;
    std::array<std::size_t, D> perm{};
    int sign = lu_decompose(lu, perm);
    if (sign == 0) {
        return 0.0;
    }
    cplx d = static_cast<double>(sign);
    for (std::size_t k = 0; k < D; k++) {
        d *= lu(k, k);
    }
    return d;
}

namespace {

// Backward-error thresholds θ_m for Padé degrees 3, 5, 7, 9, 13.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t D>
Mat<D> pade_ratio(const Mat<D> &u, const Mat<D> &v) {
    // r = (V - U)^{-1} (V + U)
    return solve(v - u, v + u);
}

template <std::size_t D>
Mat<D> pade_low(const Mat<D> &a, int degree) {
    static constexpr double b3[] = {120., 60., 12., 1.};
    static constexpr double b5[] = {30240., 15120., 3360., 420., 30., 1.};
    static constexpr double b7[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    static constexpr double b9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                    2162160.,     110880.,     3960.,       90.,        1.};
    const double *b = degree == 3 ? b3 : degree == 5 ? b5 : degree == 7 ? b7 : b9;

    const Mat<D> id = Mat<D>::identity();
    const Mat<D> a2 = a * a;
    Mat<D> pow = id;
    Mat<D> odd;   // Σ b[2k+1] A^{2k}
    Mat<D> even;  // Σ b[2k] A^{2k}
    for (int k = 0; 2 * k <= degree; k++) {
        odd = odd + cplx(b[2 * k + 1]) * pow;
        even = even + cplx(b[2 * k]) * pow;
        pow = pow * a2;
    }
    return pade_ratio(a * odd, even);
}

template <std::size_t D>
Mat<D> pade13(const Mat<D> &a) {
    static constexpr double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                   1187353796428800.,  129060195264000.,   10559470521600.,
                                   670442572800.,      33522128640.,       1323241920.,
                                   40840800.,          960960.,            16380.,
                                   182.,               1.};
    const Mat<D> id = Mat<D>::identity();
    const Mat<D> a2 = a * a;
    const Mat<D> a4 = a2 * a2;
    const Mat<D> a6 = a4 * a2;
    Mat<D> u = a6 * (cplx(b[13]) * a6 + cplx(b[11]) * a4 + cplx(b[9]) * a2);
    u = u + cplx(b[7]) * a6 + cplx(b[5]) * a4 + cplx(b[3]) * a2 + cplx(b[1]) * id;
    u = a * u;
    Mat<D> v = a6 * (cplx(b[12]) * a6 + cplx(b[10]) * a4 + cplx(b[8]) * a2);
    v = v + cplx(b[6]) * a6 + cplx(b[4]) * a4 + cplx(b[2]) * a2 + cplx(b[0]) * id;
    return pade_ratio(u, v);
}

}  // namespace

template <std::size_t D>
Mat<D> expm(const Mat<D> &m) {
    if (!all_finite(m)) {
        throw OverflowError("expm: non-finite input");
    }
    const double norm = norm_inf(m);
    if (norm > kExpNormLimit) {
        throw OverflowError("expm: norm " + std::to_string(norm) + " exceeds supported range");
    }
    if (norm <= kTheta3) {
        return pade_low(m, 3);
    }
    if (norm <= kTheta5) {
        return pade_low(m, 5);
    }
    if (norm <= kTheta7) {
        return pade_low(m, 7);
    }
    if (norm <= kTheta9) {
        return pade_low(m, 9);
    }
    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    }
    Mat<D> r = pade13(cplx(std::ldexp(1.0, -squarings)) * m);
    for (int k = 0; k < squarings; k++) {
        r = r * r;
    }
    if (!all_finite(r)) {
        throw OverflowError("expm: result overflowed");
    }
    return r;
}

template Mat2 solve(const Mat2 &, const Mat2 &);
template Mat4 solve(const Mat4 &, const Mat4 &);
template cplx det(const Mat2 &);
template cplx det(const Mat4 &);
template Mat2 expm(const Mat2 &);
template Mat4 expm(const Mat4 &);

}  // namespace mipd
