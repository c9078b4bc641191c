#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace cavsim {

using cxd = std::complex<double>;
using CMatrix = Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;

enum class OpTag { general, hermitian };

struct Triplet {
    int row;
    int col;
    cxd value;
};

// Complex CSR matrix.  Square, immutable after construction.
class SparseOperator {
public:
    SparseOperator() = default;

    static SparseOperator from_triplets(int dim, std::vector<Triplet> entries,
                                        OpTag tag = OpTag::general);
    static SparseOperator identity(int dim);
    static SparseOperator zero(int dim);
    static SparseOperator from_dense(const CMatrix& m, OpTag tag = OpTag::general,
                                     double prune = 0.0);

    int dim() const { return dim_; }
    std::size_t nnz() const { return val_.size(); }
    OpTag tag() const { return tag_; }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<cxd>& values() const { return val_; }

    SparseOperator adjoint() const;
    SparseOperator scaled(cxd a) const;
    SparseOperator plus(const SparseOperator& other, cxd a = 1.0) const;  // this + a*other
    SparseOperator times(const SparseOperator& other) const;             // this * other
    SparseOperator symmetrized() const;                                  // (this + this^dag)/2, hermitian-tagged

    // max |A_ij - conj(A_ji)|
    double hermiticity_defect() const;
    double max_abs() const;

    CMatrix dense() const;

    // Y += a * this * X ; Y += a * X * this  (X, Y row-major dim x ncols)
    void add_mul_left(cxd a, const cxd* x, cxd* y, int ncols) const;
    void add_mul_right(cxd a, const cxd* x, cxd* y, int ncols) const;
    // y += a * this * x
    void add_apply(cxd a, const cxd* x, cxd* y) const;

    // tr(rho * this)
    cxd expectation(const CMatrix& rho) const;
    // <psi| this |psi>
    cxd expectation(const CVector& psi) const;

private:
    int dim_ = 0;
    OpTag tag_ = OpTag::general;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<cxd> val_;
};

// Kronecker product (row-major index = i_a * dim_b + i_b).
SparseOperator kron(const SparseOperator& a, const SparseOperator& b);

// Ordered list of factor dimensions; embeds single-factor operators.
struct TensorSpace {
    std::vector<int> dims;

    int dim() const {
        int d = 1;
        for (int f : dims) d *= f;
        return d;
    }
    SparseOperator embed(std::size_t factor, const SparseOperator& op) const;
};

}  // namespace cavsim
