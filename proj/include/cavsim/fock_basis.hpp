#pragma once

#include <map>
#include <vector>

#include "cavsim/sparse.hpp"

namespace cavsim {

// N bosonic atoms over a truncated momentum-mode window n_min..n_max
// (inclusive).  States are occupation vectors in decreasing lexicographic
// order, so indices are reproducible.  Hops that would leave the window
// annihilate.
class SymmetricFockBasis {
public:
    SymmetricFockBasis(int n_atoms, int n_min, int n_max);

    int dim() const { return int(states_.size()); }
    int n_atoms() const { return n_atoms_; }
    int n_modes() const { return n_max_ - n_min_ + 1; }
    int n_min() const { return n_min_; }
    int n_max() const { return n_max_; }
    bool contains_mode(int n) const { return n >= n_min_ && n <= n_max_; }

    const std::vector<std::vector<int>>& states() const { return states_; }
    // -1 when absent
    int index_of(const std::vector<int>& occupation) const;

    SparseOperator number_op(int n) const;  // b^dag_n b_n
    SparseOperator total_number() const;
    // b^dag_dst b_src; zero operator when either mode is outside the window
    SparseOperator hop(int src, int dst) const;
    SparseOperator j_plus(int n) const { return hop(n, n + 1); }
    SparseOperator j_minus(int n) const { return hop(n, n - 1); }
    SparseOperator cos_op(int n) const;  // C_n = (J+_n + J-_{n+1})/2
    SparseOperator sin_op(int n) const;  // S_n = (J+_n - J-_{n+1})/(2i)

    // Product state (sum_n c_n b^dag_n)^N / sqrt(N!) |vac>; coefficients
    // indexed by momentum index n (normalized internally).
    CVector product_state(const std::map<int, cxd>& amplitudes) const;

private:
    int n_atoms_;
    int n_min_;
    int n_max_;
    std::vector<std::vector<int>> states_;
    std::map<std::vector<int>, int> index_;
};

// C(n + m - 1, m - 1) as double (overflow-safe for desk scales)
double symmetric_dim(int n_atoms, int n_modes);

}  // namespace cavsim
