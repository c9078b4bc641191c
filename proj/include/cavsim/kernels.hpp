#pragma once

#include <complex>
#include <cstddef>

// Hot complex-arithmetic inner loops used by the sparse operators and the
// time integrator.  Each kernel has a scalar reference implementation and an
// AVX2 variant; the active table is selected once at startup from CPU
// features (override with CAVSIM_KERNELS=scalar|avx2, e.g. for the
// equivalence tests).  All matrices are row-major.

namespace cavsim::kernels {

using cxd = std::complex<double>;

struct Ops {
    const char* name;

    // y += a*x
    void (*axpy)(cxd a, const cxd* x, cxd* y, std::size_t n);
    // x *= a
    void (*scale)(cxd a, cxd* x, std::size_t n);
    // Y += a * A * X   (A: m x m CSR, X/Y: m x ncols dense row-major)
    void (*csr_mm_left)(cxd a, const int* row_ptr, const int* col_idx,
                        const cxd* val, int m, const cxd* x, cxd* y, int ncols);
    // Y += a * X * A   (same shapes; uses rows of A against rows of X)
    void (*csr_mm_right)(cxd a, const int* row_ptr, const int* col_idx,
                         const cxd* val, int m, const cxd* x, cxd* y, int ncols);
};

const Ops& scalar_ops();

// nullptr when the CPU (or the build) lacks AVX2+FMA.
const Ops* avx2_ops();

// Active table after runtime dispatch.
const Ops& active();

// Test hook: force a specific table (nullptr restores automatic selection).
void force(const Ops* ops);

bool avx2_supported();

// Scalar helpers shared by both paths.
void zero(cxd* x, std::size_t n);
void copy(const cxd* x, cxd* y, std::size_t n);

// Mixed absolute/relative max-norm of an embedded-RK error estimate.
double error_norm(const cxd* err, const cxd* y0, const cxd* y1, std::size_t n,
                  double atol, double rtol);

}  // namespace cavsim::kernels
