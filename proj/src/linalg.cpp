#include "mimo/cmat.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace mimo {

// Left-looking complex Cholesky. Column sizes here are a few hundred at
// most, so the scalar inner loops are not worth vectorizing.
void cholesky_in_place(CMat& a) {
    if (a.rows != a.cols) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = a.rows;
    for (std::size_t j = 0; j < n; ++j) {
        double djj = a.re[j * n + j];
        for (std::size_t k = 0; k < j; ++k) {
            const double lr = a.re[k * n + j];
            const double li = a.im[k * n + j];
            djj -= lr * lr + li * li;
        }
        if (!(djj > 0.0)) throw std::runtime_error("cholesky: matrix not positive definite");
        const double ljj = std::sqrt(djj);
        a.re[j * n + j] = ljj;
        a.im[j * n + j] = 0.0;

        const double inv = 1.0 / ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double sr = a.re[j * n + i];
            double si = a.im[j * n + i];
            for (std::size_t k = 0; k < j; ++k) {
                // A[i,j] -= L[i,k] * conj(L[j,k])
                const double xr = a.re[k * n + i], xi = a.im[k * n + i];
                const double yr = a.re[k * n + j], yi = a.im[k * n + j];
                sr -= xr * yr + xi * yi;
                si -= xi * yr - xr * yi;
            }
            a.re[j * n + i] = sr * inv;
            a.im[j * n + i] = si * inv;
        }
    }
}

void cholesky_solve(const CMat& l, CVec& b) {
    const std::size_t n = l.rows;
    if (b.size() != n) throw std::invalid_argument("cholesky_solve: size mismatch");

    // forward: L z = b
    for (std::size_t i = 0; i < n; ++i) {
        double sr = b.re[i], si = b.im[i];
        for (std::size_t k = 0; k < i; ++k) {
            const double lr = l.re[k * n + i], li = l.im[k * n + i];
            sr -= lr * b.re[k] - li * b.im[k];
            si -= lr * b.im[k] + li * b.re[k];
        }
        const double d = l.re[i * n + i];
        b.re[i] = sr / d;
        b.im[i] = si / d;
    }
    // backward: L^H x = z
    for (std::size_t ii = n; ii-- > 0;) {
        double sr = b.re[ii], si = b.im[ii];
        for (std::size_t k = ii + 1; k < n; ++k) {
            // conj(L[k,ii]) * x[k]
            const double lr = l.re[ii * n + k], li = l.im[ii * n + k];
            sr -= lr * b.re[k] + li * b.im[k];
            si -= lr * b.im[k] - li * b.re[k];
        }
        const double d = l.re[ii * n + ii];
        b.re[ii] = sr / d;
        b.im[ii] = si / d;
    }
}

} // namespace mimo
