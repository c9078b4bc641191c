// AVX2+FMA variants of the complex kernels.  Compiled with -mavx2 -mfma in a
// dedicated translation unit; only reachable after the runtime CPU check.

#include "cavsim/kernels.hpp"

#if defined(CAVSIM_BUILD_AVX2)

#include <immintrin.h>

namespace cavsim::kernels {

namespace {

// Two packed complex<double> per __m256d: [re0, im0, re1, im1].
// (ar + i*ai) * x  ==  addsub(x*ar, swap(x)*ai)
inline __m256d cmul(__m256d x, __m256d ar, __m256d ai) {
    const __m256d xs = _mm256_permute_pd(x, 0x5);  // swap re/im in each pair
    return _mm256_fmaddsub_pd(x, ar, _mm256_mul_pd(xs, ai));
}

void axpy_avx2(cxd a, const cxd* x, cxd* y, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul(xv, ar, ai)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(cxd a, cxd* x, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    auto* xd = reinterpret_cast<double*>(x);
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        _mm256_storeu_pd(xd + 2 * i, cmul(xv, ar, ai));
    }
    for (; i < n; ++i) x[i] *= a;
}

// yrow[0..ncols) += c * xrow[0..ncols)
inline void row_axpy(cxd c, const cxd* xrow, cxd* yrow, int ncols) {
    const __m256d cr = _mm256_set1_pd(c.real());
    const __m256d ci = _mm256_set1_pd(c.imag());
    int j = 0;
    auto* xd = reinterpret_cast<const double*>(xrow);
    auto* yd = reinterpret_cast<double*>(yrow);
    for (; j + 2 <= ncols; j += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * j);
        _mm256_storeu_pd(yd + 2 * j, _mm256_add_pd(yv, cmul(xv, cr, ci)));
    }
    for (; j < ncols; ++j) yrow[j] += c * xrow[j];
}

void csr_mm_left_avx2(cxd a, const int* row_ptr, const int* col_idx,
                      const cxd* val, int m, const cxd* x, cxd* y, int ncols) {
    for (int i = 0; i < m; ++i) {
        cxd* yrow = y + static_cast<std::size_t>(i) * ncols;
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
            row_axpy(a * val[p], x + static_cast<std::size_t>(col_idx[p]) * ncols,
                     yrow, ncols);
    }
}

void csr_mm_right_avx2(cxd a, const int* row_ptr, const int* col_idx,
                       const cxd* val, int m, const cxd* x, cxd* y, int ncols) {
    for (int i = 0; i < m; ++i) {
        const cxd* xrow = x + static_cast<std::size_t>(i) * ncols;
        cxd* yrow = y + static_cast<std::size_t>(i) * ncols;
        for (int k = 0; k < m; ++k) {
            const cxd c = a * xrow[k];
            if (c == cxd(0.0, 0.0)) continue;
            for (int p = row_ptr[k]; p < row_ptr[k + 1]; ++p)
                yrow[col_idx[p]] += c * val[p];
        }
    }
}

}  // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops{"avx2", axpy_avx2, scale_avx2, csr_mm_left_avx2,
                         csr_mm_right_avx2};
    return &ops;
}

}  // namespace cavsim::kernels

#endif  // CAVSIM_BUILD_AVX2
