#pragma once
// Naive reference implementations used as test oracles. They are written
// directly from the protocol definitions with plain 2×2 arithmetic and share
// no code with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using cx = std::complex<double>;

struct M2 {
    cx a, b, c, d;  // [[a, b], [c, d]]
};

inline M2 mul(const M2 &x, const M2 &y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline M2 dagger(const M2 &x) { return {std::conj(x.a), std::conj(x.c), std::conj(x.b), std::conj(x.d)}; }

inline M2 rot(double theta, double phi) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const cx e = std::polar(1.0, -phi);
    return {c, s * e, s, -c * e};
}

inline M2 kraus(int k, int r, double C, double A, double theta, int d, int N) {
    M2 m;
    if (r == 0) {
        m = {1.0, 0.0, 0.0, std::exp(cx(-2.0 * C / N, -2.0 * A / N))};
    } else {
        m = {0.0, 0.0, 0.0, std::sqrt(1.0 - std::exp(-4.0 * C / N))};
    }
    const M2 R = rot(theta, 2 * std::numbers::pi * k * d / (N + 1));
    return mul(dagger(R), mul(m, R));
}

struct Totals {
    cx z;
    double accepted = 0, rejected = 0;
};

// Depth-first sum over all 2^N readout strings.
inline Totals enumerate(double C, double A, double theta, int d, int N) {
    std::vector<M2> k0(N + 1), k1(N + 1);
    for (int k = 1; k <= N; k++) {
        k0[k] = kraus(k, 0, C, A, theta, d, N);
        k1[k] = kraus(k, 1, C, A, theta, d, N);
    }
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Totals t;
    const std::uint64_t total = std::uint64_t{1} << N;
    for (std::uint64_t seq = 0; seq < total; seq++) {
        cx u = c, v = s;
        for (int k = 1; k <= N; k++) {
            const M2 &m = (seq >> (k - 1)) & 1 ? k1[k] : k0[k];
            const cx nu = m.a * u + m.b * v, nv = m.c * u + m.d * v;
            u = nu;
            v = nv;
        }
        const cx acc = c * u + s * v;   // ⟨ψ0|·⟩, ψ0 real
        const cx rej = -s * u + c * v;  // orthogonal complement
        t.z += acc * acc;
        t.accepted += std::norm(acc);
        t.rejected += std::norm(rej);
    }
    return t;
}

// C = 0: a single unitary product contributes.
inline cx unitary_product_z(double A, double theta, int d, int N) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    cx u = c, v = s;
    for (int k = 1; k <= N; k++) {
        const M2 m = kraus(k, 0, 0.0, A, theta, d, N);
        const cx nu = m.a * u + m.b * v, nv = m.c * u + m.d * v;
        u = nu;
        v = nv;
    }
    const cx amp = c * u + s * v;
    return amp * amp;
}

// C = 0, N → ∞: the single-spin evolution is generated by the 2×2
// anti-Hermitian L = [[iπd cosθ, −iπd sinθ], [−iπd sinθ, −iπd cosθ − 2iA]],
// and z = (e^L)_{↑↑}². Closed form for the exponential of a 2×2 matrix.
inline cx unitary_asymptotic_z(double A, double theta, int d) {
    const double pi = std::numbers::pi;
    const cx i(0, 1);
    const cx l00 = i * pi * double(d) * std::cos(theta);
    const cx l01 = -i * pi * double(d) * std::sin(theta);
    const cx l11 = -i * pi * double(d) * std::cos(theta) - 2.0 * i * A;
    const cx t = (l00 + l11) / 2.0;
    const cx h00 = l00 - t;
    const cx mu = std::sqrt(h00 * h00 + l01 * l01);
    const cx sinhc = std::abs(mu) < 1e-300 ? cx(1.0) : std::sinh(mu) / mu;
    const cx e00 = std::exp(t) * (std::cosh(mu) + sinhc * h00);
    return e00 * e00;
}

}  // namespace oracle
