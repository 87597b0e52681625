// Compiled with -mavx2 (and without -mfma) on x86-64 only.

#include <immintrin.h>

#include "mipd/kernels.hpp"

namespace mipd::kernels {

namespace {

void transfer_power_avx2(const Mat4 &m, Vec<4> &v, std::uint64_t steps) {
    // Column j of the real and imaginary planes; lane i holds row i.
    __m256d col_r[4], col_i[4];
    for (int j = 0; j < 4; j++) {
        col_r[j] = _mm256_setr_pd(m(0, j).real(), m(1, j).real(), m(2, j).real(), m(3, j).real());
        col_i[j] = _mm256_setr_pd(m(0, j).imag(), m(1, j).imag(), m(2, j).imag(), m(3, j).imag());
    }
    alignas(32) double vr[4], vi[4];
    for (int j = 0; j < 4; j++) {
        vr[j] = v[j].real();
        vi[j] = v[j].imag();
    }
    __m256d xr = _mm256_load_pd(vr);
    __m256d xi = _mm256_load_pd(vi);
    for (std::uint64_t s = 0; s < steps; s++) {
        _mm256_store_pd(vr, xr);
        _mm256_store_pd(vi, xi);
        __m256d yr = _mm256_setzero_pd();
        __m256d yi = _mm256_setzero_pd();
        for (int j = 0; j < 4; j++) {
            const __m256d br = _mm256_set1_pd(vr[j]);
            const __m256d bi = _mm256_set1_pd(vi[j]);
            yr = _mm256_add_pd(yr, _mm256_sub_pd(_mm256_mul_pd(col_r[j], br), _mm256_mul_pd(col_i[j], bi)));
            yi = _mm256_add_pd(yi, _mm256_add_pd(_mm256_mul_pd(col_r[j], bi), _mm256_mul_pd(col_i[j], br)));
        }
        xr = yr;
        xi = yi;
    }
    _mm256_store_pd(vr, xr);
    _mm256_store_pd(vi, xi);
    for (int j = 0; j < 4; j++) {
        v[j] = cplx(vr[j], vi[j]);
    }
}

inline __m256d cmul_re(__m256d ar, __m256d ai, __m256d xr, __m256d xi) {
    return _mm256_sub_pd(_mm256_mul_pd(ar, xr), _mm256_mul_pd(ai, xi));
}

inline __m256d cmul_im(__m256d ar, __m256d ai, __m256d xr, __m256d xi) {
    return _mm256_add_pd(_mm256_mul_pd(ar, xi), _mm256_mul_pd(ai, xr));
}

void apply_mat2_avx2(const Mat2 &m, BatchView in, BatchSpan out) {
    const __m256d ar = _mm256_set1_pd(m(0, 0).real()), ai = _mm256_set1_pd(m(0, 0).imag());
    const __m256d br = _mm256_set1_pd(m(0, 1).real()), bi = _mm256_set1_pd(m(0, 1).imag());
    const __m256d cr = _mm256_set1_pd(m(1, 0).real()), ci = _mm256_set1_pd(m(1, 0).imag());
    const __m256d dr = _mm256_set1_pd(m(1, 1).real()), di = _mm256_set1_pd(m(1, 1).imag());
    const std::size_t n = in.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d xr = _mm256_loadu_pd(&in.re0[k]), xi = _mm256_loadu_pd(&in.im0[k]);
        const __m256d yr = _mm256_loadu_pd(&in.re1[k]), yi = _mm256_loadu_pd(&in.im1[k]);
        _mm256_storeu_pd(&out.re0[k], _mm256_add_pd(cmul_re(ar, ai, xr, xi), cmul_re(br, bi, yr, yi)));
        _mm256_storeu_pd(&out.im0[k], _mm256_add_pd(cmul_im(ar, ai, xr, xi), cmul_im(br, bi, yr, yi)));
        _mm256_storeu_pd(&out.re1[k], _mm256_add_pd(cmul_re(cr, ci, xr, xi), cmul_re(dr, di, yr, yi)));
        _mm256_storeu_pd(&out.im1[k], _mm256_add_pd(cmul_im(cr, ci, xr, xi), cmul_im(dr, di, yr, yi)));
    }
    if (k < n) {
        const std::size_t rest = n - k;
        scalar_table().apply_mat2(
            m, BatchView{in.re0.subspan(k, rest), in.im0.subspan(k, rest), in.re1.subspan(k, rest), in.im1.subspan(k, rest)},
            BatchSpan{out.re0.subspan(k, rest), out.im0.subspan(k, rest), out.re1.subspan(k, rest),
                      out.im1.subspan(k, rest)});
    }
}

OverlapSums overlap_sums_avx2(const Vec<2> &row, BatchView in) {
    const __m256d pr = _mm256_set1_pd(row[0].real()), pi = _mm256_set1_pd(row[0].imag());
    const __m256d qr = _mm256_set1_pd(row[1].real()), qi = _mm256_set1_pd(row[1].imag());
    const __m256d two = _mm256_set1_pd(2.0);
    __m256d sq_re = _mm256_setzero_pd();
    __m256d sq_im = _mm256_setzero_pd();
    __m256d ab = _mm256_setzero_pd();
    const std::size_t n = in.size();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d xr = _mm256_loadu_pd(&in.re0[k]), xi = _mm256_loadu_pd(&in.im0[k]);
        const __m256d yr = _mm256_loadu_pd(&in.re1[k]), yi = _mm256_loadu_pd(&in.im1[k]);
        const __m256d amp_r = _mm256_add_pd(cmul_re(pr, pi, xr, xi), cmul_re(qr, qi, yr, yi));
        const __m256d amp_i = _mm256_add_pd(cmul_im(pr, pi, xr, xi), cmul_im(qr, qi, yr, yi));
        const __m256d rr = _mm256_mul_pd(amp_r, amp_r);
        const __m256d ii = _mm256_mul_pd(amp_i, amp_i);
        sq_re = _mm256_add_pd(sq_re, _mm256_sub_pd(rr, ii));
        sq_im = _mm256_add_pd(sq_im, _mm256_mul_pd(_mm256_mul_pd(amp_r, amp_i), two));
        ab = _mm256_add_pd(ab, _mm256_add_pd(rr, ii));
    }
    alignas(32) double lre[4], lim[4], lab[4];
    _mm256_store_pd(lre, sq_re);
    _mm256_store_pd(lim, sq_im);
    _mm256_store_pd(lab, ab);
    // Tail elements continue in their lane (k & 3), as in the scalar order.
    for (; k < n; k++) {
        const std::size_t lane = k & 3;
        const double xr = in.re0[k], xi = in.im0[k];
        const double yr = in.re1[k], yi = in.im1[k];
        const double p_r = row[0].real(), p_i = row[0].imag();
        const double q_r = row[1].real(), q_i = row[1].imag();
        const double amp_r = (p_r * xr - p_i * xi) + (q_r * yr - q_i * yi);
        const double amp_i = (p_r * xi + p_i * xr) + (q_r * yi + q_i * yr);
        lre[lane] = lre[lane] + (amp_r * amp_r - amp_i * amp_i);
        lim[lane] = lim[lane] + (amp_r * amp_i) * 2.0;
        lab[lane] = lab[lane] + (amp_r * amp_r + amp_i * amp_i);
    }
    return OverlapSums{
        cplx((lre[0] + lre[1]) + (lre[2] + lre[3]), (lim[0] + lim[1]) + (lim[2] + lim[3])),
        (lab[0] + lab[1]) + (lab[2] + lab[3]),
    };
}

}  // namespace

const KernelTable &avx2_table_impl() {
    static const KernelTable table{Isa::Avx2, transfer_power_avx2, apply_mat2_avx2, overlap_sums_avx2};
    return table;
}

}  // namespace mipd::kernels
