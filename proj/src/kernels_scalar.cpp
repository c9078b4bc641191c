#include "cavsim/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace cavsim::kernels {

namespace {

void axpy_scalar(cxd a, const cxd* x, cxd* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(cxd a, cxd* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void csr_mm_left_scalar(cxd a, const int* row_ptr, const int* col_idx,
                        const cxd* val, int m, const cxd* x, cxd* y, int ncols) {
    for (int i = 0; i < m; ++i) {
        cxd* yrow = y + static_cast<std::size_t>(i) * ncols;
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            const cxd c = a * val[p];
            const cxd* xrow = x + static_cast<std::size_t>(col_idx[p]) * ncols;
            for (int j = 0; j < ncols; ++j) yrow[j] += c * xrow[j];
        }
    }
}

void csr_mm_right_scalar(cxd a, const int* row_ptr, const int* col_idx,
                         const cxd* val, int m, const cxd* x, cxd* y, int ncols) {
    // Y[i,:] += a * X[i,k] * A[k,:] for every stored A[k,j]
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

const Ops& scalar_ops() {
    static const Ops ops{"scalar", axpy_scalar, scale_scalar,
                         csr_mm_left_scalar, csr_mm_right_scalar};
    return ops;
}

void zero(cxd* x, std::size_t n) { std::fill(x, x + n, cxd(0.0, 0.0)); }

void copy(const cxd* x, cxd* y, std::size_t n) { std::copy(x, x + n, y); }

double error_norm(const cxd* err, const cxd* y0, const cxd* y1, std::size_t n,
                  double atol, double rtol) {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        worst = std::max(worst, std::abs(err[i]) / sc);
    }
    return worst;
}

}  // namespace cavsim::kernels
