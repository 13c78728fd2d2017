#pragma once
// Split-complex vectors and column-major matrices backing the kernels.

#include "mimo/kernels.hpp"

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mimo {

struct CVec {
    std::vector<double> re, im;

    CVec() = default;
    explicit CVec(std::size_t n) : re(n, 0.0), im(n, 0.0) {}

    std::size_t size() const { return re.size(); }

    std::complex<double> at(std::size_t i) const { return {re[i], im[i]}; }
    void set(std::size_t i, std::complex<double> v) {
        re[i] = v.real();
        im[i] = v.imag();
    }

    void fill_zero() {
        std::fill(re.begin(), re.end(), 0.0);
        std::fill(im.begin(), im.end(), 0.0);
    }

    double norm_sq() const { return simd::norm_sq(size(), re.data(), im.data()); }
};

// Column-major M x N matrix; column c occupies [c*rows, (c+1)*rows).
struct CMat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> re, im;

    CMat() = default;
    CMat(std::size_t r, std::size_t c) : rows(r), cols(c), re(r * c, 0.0), im(r * c, 0.0) {}

    double* col_re(std::size_t c) { return re.data() + c * rows; }
    double* col_im(std::size_t c) { return im.data() + c * rows; }
    const double* col_re(std::size_t c) const { return re.data() + c * rows; }
    const double* col_im(std::size_t c) const { return im.data() + c * rows; }

    std::complex<double> at(std::size_t r, std::size_t c) const {
        return {re[c * rows + r], im[c * rows + r]};
    }
    void set(std::size_t r, std::size_t c, std::complex<double> v) {
        re[c * rows + r] = v.real();
        im[c * rows + r] = v.imag();
    }

    CVec col_copy(std::size_t c) const {
        CVec v(rows);
        std::copy(col_re(c), col_re(c) + rows, v.re.begin());
        std::copy(col_im(c), col_im(c) + rows, v.im.begin());
        return v;
    }

    // conj(col a of this) . (col b of other)
    std::complex<double> col_dot_conj(std::size_t a, const CMat& other, std::size_t b) const {
        return simd::dot_conj(rows, col_re(a), col_im(a), other.col_re(b), other.col_im(b));
    }

    double col_norm_sq(std::size_t c) const {
        return simd::norm_sq(rows, col_re(c), col_im(c));
    }
};

// In-place Cholesky factorization A = L L^H of a Hermitian positive-definite
// matrix (lower triangle referenced). Throws std::runtime_error if a pivot
// is not strictly positive.
void cholesky_in_place(CMat& a);

// Solves L L^H x = b in place, with L from cholesky_in_place.
void cholesky_solve(const CMat& l, CVec& b);

} // namespace mimo
