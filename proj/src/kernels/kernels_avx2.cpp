// AVX2+FMA kernels, 4 doubles per lane. This translation unit is compiled
// with -mavx2 -mfma; the dispatcher only installs it after a cpuid check.

#include "mimo/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace mimo::simd {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

void dot_conj_avx2(std::size_t n, const double* ar, const double* ai,
                   const double* br, const double* bi, double* out_re, double* out_im) {
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d var = _mm256_loadu_pd(ar + i);
        const __m256d vai = _mm256_loadu_pd(ai + i);
        const __m256d vbr = _mm256_loadu_pd(br + i);
        const __m256d vbi = _mm256_loadu_pd(bi + i);
        acc_re = _mm256_fmadd_pd(var, vbr, acc_re);
        acc_re = _mm256_fmadd_pd(vai, vbi, acc_re);
        acc_im = _mm256_fmadd_pd(var, vbi, acc_im);
        acc_im = _mm256_fnmadd_pd(vai, vbr, acc_im);
    }
    double re = hsum(acc_re), im = hsum(acc_im);
    for (; i < n; ++i) {
        re += ar[i] * br[i] + ai[i] * bi[i];
        im += ar[i] * bi[i] - ai[i] * br[i];
    }
    *out_re = re;
    *out_im = im;
}

double norm_sq_avx2(std::size_t n, const double* re, const double* im) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vr = _mm256_loadu_pd(re + i);
        const __m256d vi = _mm256_loadu_pd(im + i);
        acc = _mm256_fmadd_pd(vr, vr, acc);
        acc = _mm256_fmadd_pd(vi, vi, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        s += re[i] * re[i] + im[i] * im[i];
    }
    return s;
}

void axpy_avx2(std::size_t n, double sr, double si, const double* xr, const double* xi,
               double* yr, double* yi) {
    const __m256d vsr = _mm256_set1_pd(sr);
    const __m256d vsi = _mm256_set1_pd(si);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vxr = _mm256_loadu_pd(xr + i);
        const __m256d vxi = _mm256_loadu_pd(xi + i);
        __m256d vyr = _mm256_loadu_pd(yr + i);
        __m256d vyi = _mm256_loadu_pd(yi + i);
        vyr = _mm256_fmadd_pd(vsr, vxr, vyr);
        vyr = _mm256_fnmadd_pd(vsi, vxi, vyr);
        vyi = _mm256_fmadd_pd(vsr, vxi, vyi);
        vyi = _mm256_fmadd_pd(vsi, vxr, vyi);
        _mm256_storeu_pd(yr + i, vyr);
        _mm256_storeu_pd(yi + i, vyi);
    }
    for (; i < n; ++i) {
        yr[i] += sr * xr[i] - si * xi[i];
        yi[i] += sr * xi[i] + si * xr[i];
    }
}

void scale_real_avx2(std::size_t n, double s, double* re, double* im) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(re + i, _mm256_mul_pd(vs, _mm256_loadu_pd(re + i)));
        _mm256_storeu_pd(im + i, _mm256_mul_pd(vs, _mm256_loadu_pd(im + i)));
    }
    for (; i < n; ++i) {
        re[i] *= s;
        im[i] *= s;
    }
}

} // namespace

const Ops& avx2_ops() {
    static const Ops ops = {dot_conj_avx2, norm_sq_avx2, axpy_avx2, scale_real_avx2};
    return ops;
}

} // namespace mimo::simd

#endif // x86_64
