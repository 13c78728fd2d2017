// Scalar reference kernels. The SIMD variants are checked against these.

#include "mimo/kernels.hpp"

namespace mimo::simd {

namespace {

void dot_conj_scalar(std::size_t n, const double* ar, const double* ai,
                     const double* br, const double* bi, double* out_re, double* out_im) {
    double acc_re = 0.0, acc_im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // conj(a)*b = (ar - i*ai)(br + i*bi)
        acc_re += ar[i] * br[i] + ai[i] * bi[i];
        acc_im += ar[i] * bi[i] - ai[i] * br[i];
    }
    *out_re = acc_re;
    *out_im = acc_im;
}

double norm_sq_scalar(std::size_t n, const double* re, const double* im) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += re[i] * re[i] + im[i] * im[i];
    }
    return acc;
}

void axpy_scalar(std::size_t n, double sr, double si, const double* xr, const double* xi,
                 double* yr, double* yi) {
    for (std::size_t i = 0; i < n; ++i) {
        yr[i] += sr * xr[i] - si * xi[i];
        yi[i] += sr * xi[i] + si * xr[i];
    }
}

void scale_real_scalar(std::size_t n, double s, double* re, double* im) {
    for (std::size_t i = 0; i < n; ++i) {
        re[i] *= s;
        im[i] *= s;
    }
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops = {dot_conj_scalar, norm_sq_scalar, axpy_scalar, scale_real_scalar};
    return ops;
}

} // namespace mimo::simd
