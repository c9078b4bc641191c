#include "cavsim/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cavsim/kernels.hpp"

namespace cavsim {

SparseOperator SparseOperator::from_triplets(int dim, std::vector<Triplet> entries,
                                             OpTag tag) {
    if (dim < 0) throw std::invalid_argument("SparseOperator: negative dimension");
    SparseOperator out;
    out.dim_ = dim;
    out.tag_ = tag;

    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    out.row_ptr_.assign(dim + 1, 0);
    out.col_idx_.reserve(entries.size());
    out.val_.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size();) {
        const int r = entries[i].row;
        const int c = entries[i].col;
        if (r < 0 || r >= dim || c < 0 || c >= dim)
            throw std::invalid_argument("SparseOperator: index out of range");
        cxd v = entries[i].value;
        std::size_t j = i + 1;
        while (j < entries.size() && entries[j].row == r && entries[j].col == c)
            v += entries[j++].value;
        if (v != cxd(0.0, 0.0)) {
            out.col_idx_.push_back(c);
            out.val_.push_back(v);
            ++out.row_ptr_[r + 1];
        }
        i = j;
    }
    for (int r = 0; r < dim; ++r) out.row_ptr_[r + 1] += out.row_ptr_[r];
    return out;
}

SparseOperator SparseOperator::identity(int dim) {
    std::vector<Triplet> t;
    t.reserve(dim);
    for (int i = 0; i < dim; ++i) t.push_back({i, i, 1.0});
    return from_triplets(dim, std::move(t), OpTag::hermitian);
}

SparseOperator SparseOperator::zero(int dim) {
    return from_triplets(dim, {}, OpTag::hermitian);
}

SparseOperator SparseOperator::from_dense(const CMatrix& m, OpTag tag, double prune) {
    if (m.rows() != m.cols()) throw std::invalid_argument("from_dense: not square");
    std::vector<Triplet> t;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > prune) t.push_back({i, j, m(i, j)});
    return from_triplets(static_cast<int>(m.rows()), std::move(t), tag);
}

SparseOperator SparseOperator::adjoint() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (int i = 0; i < dim_; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            t.push_back({col_idx_[p], i, std::conj(val_[p])});
    return from_triplets(dim_, std::move(t), tag_);
}

SparseOperator SparseOperator::scaled(cxd a) const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (int i = 0; i < dim_; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            t.push_back({i, col_idx_[p], a * val_[p]});
    const bool keeps_herm = tag_ == OpTag::hermitian && a.imag() == 0.0;
    return from_triplets(dim_, std::move(t), keeps_herm ? OpTag::hermitian : OpTag::general);
}

SparseOperator SparseOperator::plus(const SparseOperator& other, cxd a) const {
    if (other.dim_ != dim_) throw std::invalid_argument("plus: dimension mismatch");
    std::vector<Triplet> t;
    t.reserve(nnz() + other.nnz());
    for (int i = 0; i < dim_; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            t.push_back({i, col_idx_[p], val_[p]});
    for (int i = 0; i < dim_; ++i)
        for (int p = other.row_ptr_[i]; p < other.row_ptr_[i + 1]; ++p)
            t.push_back({i, other.col_idx_[p], a * other.val_[p]});
    const bool herm = tag_ == OpTag::hermitian && other.tag_ == OpTag::hermitian &&
                      a.imag() == 0.0;
    return from_triplets(dim_, std::move(t), herm ? OpTag::hermitian : OpTag::general);
}

SparseOperator SparseOperator::times(const SparseOperator& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("times: dimension mismatch");
    std::vector<Triplet> t;
    std::map<int, cxd> row;
    for (int i = 0; i < dim_; ++i) {
        row.clear();
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            const int k = col_idx_[p];
            const cxd v = val_[p];
            for (int q = other.row_ptr_[k]; q < other.row_ptr_[k + 1]; ++q)
                row[other.col_idx_[q]] += v * other.val_[q];
        }
        for (const auto& [c, v] : row)
            if (v != cxd(0.0, 0.0)) t.push_back({i, c, v});
    }
    return from_triplets(dim_, std::move(t), OpTag::general);
}

SparseOperator SparseOperator::symmetrized() const {
    std::vector<Triplet> t;
    t.reserve(2 * nnz());
    for (int i = 0; i < dim_; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            t.push_back({i, col_idx_[p], 0.5 * val_[p]});
            t.push_back({col_idx_[p], i, 0.5 * std::conj(val_[p])});
        }
    return from_triplets(dim_, std::move(t), OpTag::hermitian);
}

double SparseOperator::hermiticity_defect() const {
    const SparseOperator diff = plus(adjoint(), -1.0);
    return diff.max_abs();
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (const cxd& v : val_) m = std::max(m, std::abs(v));
    return m;
}

CMatrix SparseOperator::dense() const {
    CMatrix m = CMatrix::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            m(i, col_idx_[p]) += val_[p];
    return m;
}

void SparseOperator::add_mul_left(cxd a, const cxd* x, cxd* y, int ncols) const {
    kernels::active().csr_mm_left(a, row_ptr_.data(), col_idx_.data(), val_.data(),
                                  dim_, x, y, ncols);
}

void SparseOperator::add_mul_right(cxd a, const cxd* x, cxd* y, int ncols) const {
    kernels::active().csr_mm_right(a, row_ptr_.data(), col_idx_.data(), val_.data(),
                                   dim_, x, y, ncols);
}

void SparseOperator::add_apply(cxd a, const cxd* x, cxd* y) const {
    kernels::active().csr_mm_left(a, row_ptr_.data(), col_idx_.data(), val_.data(),
                                  dim_, x, y, 1);
}

cxd SparseOperator::expectation(const CMatrix& rho) const {
    // tr(rho * A) = sum_{k,j} rho(j,k) A(k,j)
    cxd acc = 0.0;
    for (int k = 0; k < dim_; ++k)
        for (int p = row_ptr_[k]; p < row_ptr_[k + 1]; ++p)
            acc += rho(col_idx_[p], k) * val_[p];
    return acc;
}

cxd SparseOperator::expectation(const CVector& psi) const {
    cxd acc = 0.0;
    for (int i = 0; i < dim_; ++i) {
        cxd row = 0.0;
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            row += val_[p] * psi(col_idx_[p]);
        acc += std::conj(psi(i)) * row;
    }
    return acc;
}

SparseOperator kron(const SparseOperator& a, const SparseOperator& b) {
    std::vector<Triplet> t;
    t.reserve(a.nnz() * b.nnz());
    const int db = b.dim();
    for (int ia = 0; ia < a.dim(); ++ia)
        for (int pa = a.row_ptr()[ia]; pa < a.row_ptr()[ia + 1]; ++pa)
            for (int ib = 0; ib < db; ++ib)
                for (int pb = b.row_ptr()[ib]; pb < b.row_ptr()[ib + 1]; ++pb)
                    t.push_back({ia * db + ib, a.col_idx()[pa] * db + b.col_idx()[pb],
                                 a.values()[pa] * b.values()[pb]});
    const bool herm = a.tag() == OpTag::hermitian && b.tag() == OpTag::hermitian;
    return SparseOperator::from_triplets(a.dim() * db, std::move(t),
                                         herm ? OpTag::hermitian : OpTag::general);
}

SparseOperator TensorSpace::embed(std::size_t factor, const SparseOperator& op) const {
    if (factor >= dims.size()) throw std::invalid_argument("embed: bad factor index");
    if (op.dim() != dims[factor]) throw std::invalid_argument("embed: dimension mismatch");
    int before = 1, after = 1;
    for (std::size_t i = 0; i < factor; ++i) before *= dims[i];
    for (std::size_t i = factor + 1; i < dims.size(); ++i) after *= dims[i];
    return kron(kron(SparseOperator::identity(before), op), SparseOperator::identity(after));
}

}  // namespace cavsim
