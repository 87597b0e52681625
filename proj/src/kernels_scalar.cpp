#include "mipd/kernels.hpp"

namespace mipd::kernels {

namespace {

void transfer_power_scalar(const Mat4 &m, Vec<4> &v, std::uint64_t steps) {
    double mr[4][4], mi[4][4];
    for (std::size_t i = 0; i < 4; i++) {
        for (std::size_t j = 0; j < 4; j++) {
            mr[i][j] = m(i, j).real();
            mi[i][j] = m(i, j).imag();
        }
    }
    double vr[4], vi[4];
    for (std::size_t j = 0; j < 4; j++) {
        vr[j] = v[j].real();
        vi[j] = v[j].imag();
    }
    for (std::uint64_t s = 0; s < steps; s++) {
        double yr[4], yi[4];
        for (std::size_t i = 0; i < 4; i++) {
            double accr = 0.0;
            double acci = 0.0;
            for (std::size_t j = 0; j < 4; j++) {
                accr = accr + (mr[i][j] * vr[j] - mi[i][j] * vi[j]);
                acci = acci + (mr[i][j] * vi[j] + mi[i][j] * vr[j]);
            }
            yr[i] = accr;
            yi[i] = acci;
        }
        for (std::size_t i = 0; i < 4; i++) {
            vr[i] = yr[i];
            vi[i] = yi[i];
        }
    }
    for (std::size_t j = 0; j < 4; j++) {
        v[j] = cplx(vr[j], vi[j]);
    }
}

void apply_mat2_scalar(const Mat2 &m, BatchView in, BatchSpan out) {
    const double ar = m(0, 0).real(), ai = m(0, 0).imag();
    const double br = m(0, 1).real(), bi = m(0, 1).imag();
    const double cr = m(1, 0).real(), ci = m(1, 0).imag();
    const double dr = m(1, 1).real(), di = m(1, 1).imag();
    const std::size_t n = in.size();
    for (std::size_t k = 0; k < n; k++) {
        const double xr = in.re0[k], xi = in.im0[k];
        const double yr = in.re1[k], yi = in.im1[k];
        out.re0[k] = (ar * xr - ai * xi) + (br * yr - bi * yi);
        out.im0[k] = (ar * xi + ai * xr) + (br * yi + bi * yr);
        out.re1[k] = (cr * xr - ci * xi) + (dr * yr - di * yi);
        out.im1[k] = (cr * xi + ci * xr) + (dr * yi + di * yr);
    }
}

OverlapSums overlap_sums_scalar(const Vec<2> &row, BatchView in) {
    const double pr = row[0].real(), pi = row[0].imag();
    const double qr = row[1].real(), qi = row[1].imag();
    double sq_re[4] = {0.0, 0.0, 0.0, 0.0};
    double sq_im[4] = {0.0, 0.0, 0.0, 0.0};
    double ab[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n = in.size();
    for (std::size_t k = 0; k < n; k++) {
        const std::size_t lane = k & 3;
        const double xr = in.re0[k], xi = in.im0[k];
        const double yr = in.re1[k], yi = in.im1[k];
        const double amp_r = (pr * xr - pi * xi) + (qr * yr - qi * yi);
        const double amp_i = (pr * xi + pi * xr) + (qr * yi + qi * yr);
        sq_re[lane] = sq_re[lane] + (amp_r * amp_r - amp_i * amp_i);
        sq_im[lane] = sq_im[lane] + (amp_r * amp_i) * 2.0;
        ab[lane] = ab[lane] + (amp_r * amp_r + amp_i * amp_i);
    }
    return OverlapSums{
        cplx((sq_re[0] + sq_re[1]) + (sq_re[2] + sq_re[3]), (sq_im[0] + sq_im[1]) + (sq_im[2] + sq_im[3])),
        (ab[0] + ab[1]) + (ab[2] + ab[3]),
    };
}

}  // namespace

const KernelTable &scalar_table() {
    static const KernelTable table{Isa::Scalar, transfer_power_scalar, apply_mat2_scalar, overlap_sums_scalar};
    return table;
}

}  // namespace mipd::kernels
