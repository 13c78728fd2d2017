// NEON kernels, 2 doubles per lane. NEON is baseline on aarch64, so this
// unit needs no extra target flags there.

#include "mimo/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace mimo::simd {

namespace {

void dot_conj_neon(std::size_t n, const double* ar, const double* ai,
                   const double* br, const double* bi, double* out_re, double* out_im) {
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t var = vld1q_f64(ar + i);
        const float64x2_t vai = vld1q_f64(ai + i);
        const float64x2_t vbr = vld1q_f64(br + i);
        const float64x2_t vbi = vld1q_f64(bi + i);
        acc_re = vfmaq_f64(acc_re, var, vbr);
        acc_re = vfmaq_f64(acc_re, vai, vbi);
        acc_im = vfmaq_f64(acc_im, var, vbi);
        acc_im = vfmsq_f64(acc_im, vai, vbr);
    }
    double re = vaddvq_f64(acc_re), im = vaddvq_f64(acc_im);
    for (; i < n; ++i) {
        re += ar[i] * br[i] + ai[i] * bi[i];
        im += ar[i] * bi[i] - ai[i] * br[i];
    }
    *out_re = re;
    *out_im = im;
}

double norm_sq_neon(std::size_t n, const double* re, const double* im) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vr = vld1q_f64(re + i);
        const float64x2_t vi = vld1q_f64(im + i);
        acc = vfmaq_f64(acc, vr, vr);
        acc = vfmaq_f64(acc, vi, vi);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        s += re[i] * re[i] + im[i] * im[i];
    }
    return s;
}

void axpy_neon(std::size_t n, double sr, double si, const double* xr, const double* xi,
               double* yr, double* yi) {
    const float64x2_t vsr = vdupq_n_f64(sr);
    const float64x2_t vsi = vdupq_n_f64(si);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t vxr = vld1q_f64(xr + i);
        const float64x2_t vxi = vld1q_f64(xi + i);
        float64x2_t vyr = vld1q_f64(yr + i);
        float64x2_t vyi = vld1q_f64(yi + i);
        vyr = vfmaq_f64(vyr, vsr, vxr);
        vyr = vfmsq_f64(vyr, vsi, vxi);
        vyi = vfmaq_f64(vyi, vsr, vxi);
        vyi = vfmaq_f64(vyi, vsi, vxr);
        vst1q_f64(yr + i, vyr);
        vst1q_f64(yi + i, vyi);
    }
    for (; i < n; ++i) {
        yr[i] += sr * xr[i] - si * xi[i];
        yi[i] += sr * xi[i] + si * xr[i];
    }
}

void scale_real_neon(std::size_t n, double s, double* re, double* im) {
    const float64x2_t vs = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(re + i, vmulq_f64(vs, vld1q_f64(re + i)));
        vst1q_f64(im + i, vmulq_f64(vs, vld1q_f64(im + i)));
    }
    for (; i < n; ++i) {
        re[i] *= s;
        im[i] *= s;
    }
}

} // namespace

const Ops& neon_ops() {
    static const Ops ops = {dot_conj_neon, norm_sq_neon, axpy_neon, scale_real_neon};
    return ops;
}

} // namespace mimo::simd

#endif // aarch64
