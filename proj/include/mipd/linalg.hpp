#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace mipd {

using cplx = std::complex<double>;

/// Dense D×D complex matrix, row-major. Only D = 2 (single spin) and D = 4
/// (two replicas, basis ↑↑, ↑↓, ↓↑, ↓↓) are instantiated.
template <std::size_t D>
struct Mat {
    std::array<cplx, D * D> a{};

    static constexpr std::size_t dim = D;

    constexpr cplx &operator()(std::size_t row, std::size_t col) { return a[row * D + col]; }
    constexpr const cplx &operator()(std::size_t row, std::size_t col) const { return a[row * D + col]; }

    static Mat identity() {
        Mat m;
        for (std::size_t k = 0; k < D; k++) {
            m(k, k) = 1.0;
        }
        return m;
    }

    static Mat diag(const std::array<cplx, D> &d) {
        Mat m;
        for (std::size_t k = 0; k < D; k++) {
            m(k, k) = d[k];
        }
        return m;
    }

    bool operator==(const Mat &other) const = default;
};

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

template <std::size_t D>
using Vec = std::array<cplx, D>;

template <std::size_t D>
Mat<D> operator*(const Mat<D> &x, const Mat<D> &y) {
    Mat<D> r;
    for (std::size_t i = 0; i < D; i++) {
        for (std::size_t j = 0; j < D; j++) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < D; k++) {
                acc += x(i, k) * y(k, j);
            }
            r(i, j) = acc;
        }
    }
    return r;
}

template <std::size_t D>
Vec<D> operator*(const Mat<D> &m, const Vec<D> &v) {
    Vec<D> r{};
    for (std::size_t i = 0; i < D; i++) {
        for (std::size_t k = 0; k < D; k++) {
            r[i] += m(i, k) * v[k];
        }
    }
    return r;
}

template <std::size_t D>
Mat<D> operator+(Mat<D> x, const Mat<D> &y) {
    for (std::size_t k = 0; k < D * D; k++) {
        x.a[k] += y.a[k];
    }
    return x;
}

template <std::size_t D>
Mat<D> operator-(Mat<D> x, const Mat<D> &y) {
    for (std::size_t k = 0; k < D * D; k++) {
        x.a[k] -= y.a[k];
    }
    return x;
}

template <std::size_t D>
Mat<D> operator-(Mat<D> x) {
    for (auto &e : x.a) {
        e = -e;
    }
    return x;
}

template <std::size_t D>
Mat<D> operator*(cplx s, Mat<D> x) {
    for (auto &e : x.a) {
        e *= s;
    }
    return x;
}

template <std::size_t D>
Mat<D> adjoint(const Mat<D> &m) {
    Mat<D> r;
    for (std::size_t i = 0; i < D; i++) {
        for (std::size_t j = 0; j < D; j++) {
            r(i, j) = std::conj(m(j, i));
        }
    }
    return r;
}

template <std::size_t D>
Mat<D> conj(Mat<D> m) {
    for (auto &e : m.a) {
        e = std::conj(e);
    }
    return m;
}

template <std::size_t D>
cplx trace(const Mat<D> &m) {
    cplx t = 0.0;
    for (std::size_t k = 0; k < D; k++) {
        t += m(k, k);
    }
    return t;
}

/// Max absolute row sum (the induced ∞-norm).
template <std::size_t D>
double norm_inf(const Mat<D> &m) {
    double best = 0.0;
    for (std::size_t i = 0; i < D; i++) {
        double row = 0.0;
        for (std::size_t j = 0; j < D; j++) {
            row += std::abs(m(i, j));
        }
        best = row > best ? row : best;
    }
    return best;
}

/// Largest absolute entry; used for elementwise comparisons in tests.
template <std::size_t D>
double max_abs(const Mat<D> &m) {
    double best = 0.0;
    for (const auto &e : m.a) {
        best = std::abs(e) > best ? std::abs(e) : best;
    }
    return best;
}

template <std::size_t D>
bool all_finite(const Mat<D> &m) {
    for (const auto &e : m.a) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
            return false;
        }
    }
    return true;
}

template <std::size_t D>
Mat<D> power(Mat<D> base, unsigned long long exponent) {
    Mat<D> result = Mat<D>::identity();
    while (exponent) {
        if (exponent & 1) {
            result = result * base;
        }
        exponent >>= 1;
        if (exponent) {
            base = base * base;
        }
    }
    return result;
}

/// Replica product: entry ((s1' s2'), (s1 s2)) = a(s1', s1) · b(s2', s2), with
/// the replica-pair index 2·s1 + s2.
Mat4 tensor2(const Mat2 &a, const Mat2 &b);

/// Solves den·X = num by LU with partial pivoting. Throws NumericError on an
/// exactly singular pivot.
template <std::size_t D>
Mat<D> solve(const Mat<D> &den, const Mat<D> &num);

/// Determinant via LU with partial pivoting.
template <std::size_t D>
cplx det(const Mat<D> &m);

/// Matrix exponential by scaling and squaring with Padé approximants up to
/// degree 13 (Higham 2005). Valid for non-normal and defective inputs.
/// Throws OverflowError when norm_inf(m) exceeds kExpNormLimit, on
/// non-finite input, or when the result overflows.
template <std::size_t D>
Mat<D> expm(const Mat<D> &m);

/// Largest accepted input norm. Dissipative generators can have large norms
/// and a small exponential, so overflow of the result is checked separately.
inline constexpr double kExpNormLimit = 1e5;

}  // namespace mipd
