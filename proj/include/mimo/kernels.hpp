#pragma once
// Vector kernels over split-complex (planar) arrays: separate re[]/im[]
// buffers, which keeps the SIMD variants free of shuffle traffic. A scalar
// reference implementation always exists; AVX2 (x86) and NEON (aarch64)
// variants are selected at runtime and equivalence-tested against it.

#include <complex>
#include <cstddef>
#include <string>

namespace mimo::simd {

enum class Backend { scalar, avx2, neon };

struct Ops {
    // out = sum_i conj(a_i) * b_i
    void (*dot_conj)(std::size_t n, const double* ar, const double* ai,
                     const double* br, const double* bi, double* out_re, double* out_im);
    // sum_i |a_i|^2
    double (*norm_sq)(std::size_t n, const double* re, const double* im);
    // y += s * x, complex scalar s
    void (*axpy)(std::size_t n, double sr, double si, const double* xr, const double* xi,
                 double* yr, double* yi);
    // x *= s, real scalar
    void (*scale_real)(std::size_t n, double s, double* re, double* im);
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
const Ops& avx2_ops();   // call only if avx2_supported()
bool avx2_supported();
#endif
#if defined(__aarch64__)
const Ops& neon_ops();
#endif

// Active backend: picked at startup from CPU features, overridable (tests,
// --simd flag). force_backend throws std::invalid_argument if unavailable.
const Ops& active();
Backend active_backend();
void force_backend(Backend b);
Backend detect_backend();

Backend backend_from_name(const std::string& name); // "auto"|"scalar"|"avx2"|"neon"
std::string backend_name(Backend b);

inline std::complex<double> dot_conj(std::size_t n, const double* ar, const double* ai,
                                     const double* br, const double* bi) {
    double re, im;
    active().dot_conj(n, ar, ai, br, bi, &re, &im);
    return {re, im};
}

inline double norm_sq(std::size_t n, const double* re, const double* im) {
    return active().norm_sq(n, re, im);
}

inline void axpy(std::size_t n, std::complex<double> s, const double* xr, const double* xi,
                 double* yr, double* yi) {
    active().axpy(n, s.real(), s.imag(), xr, xi, yr, yi);
}

inline void scale_real(std::size_t n, double s, double* re, double* im) {
    active().scale_real(n, s, re, im);
}

} // namespace mimo::simd
