#include "cavsim/fock_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace cavsim {

double symmetric_dim(int n_atoms, int n_modes) {
    double v = 1.0;
    for (int i = 1; i <= n_modes - 1; ++i)
        v *= double(n_atoms + i) / double(i);
    return std::round(v);
}

SymmetricFockBasis::SymmetricFockBasis(int n_atoms, int n_min, int n_max)
    : n_atoms_(n_atoms), n_min_(n_min), n_max_(n_max) {
    if (n_atoms < 1) throw std::invalid_argument("basis: need at least one atom");
    if (n_min >= n_max) throw std::invalid_argument("basis: window needs n_min < n_max");

    const int modes = n_modes();
    std::vector<int> occ(modes, 0);
    // decreasing lexicographic enumeration
    auto rec = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == modes - 1) {
            occ[slot] = remaining;
            states_.push_back(occ);
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            occ[slot] = k;
            self(self, slot + 1, remaining - k);
        }
    };
    rec(rec, 0, n_atoms);
    for (int i = 0; i < int(states_.size()); ++i) index_[states_[i]] = i;
}

int SymmetricFockBasis::index_of(const std::vector<int>& occupation) const {
    const auto it = index_.find(occupation);
    return it == index_.end() ? -1 : it->second;
}

SparseOperator SymmetricFockBasis::number_op(int n) const {
    if (!contains_mode(n)) return SparseOperator::zero(dim());
    const int slot = n - n_min_;
    std::vector<Triplet> t;
    for (int i = 0; i < dim(); ++i)
        if (states_[i][slot] > 0) t.push_back({i, i, double(states_[i][slot])});
    return SparseOperator::from_triplets(dim(), std::move(t), OpTag::hermitian);
}

SparseOperator SymmetricFockBasis::total_number() const {
    std::vector<Triplet> t;
    for (int i = 0; i < dim(); ++i) t.push_back({i, i, double(n_atoms_)});
    return SparseOperator::from_triplets(dim(), std::move(t), OpTag::hermitian);
}

SparseOperator SymmetricFockBasis::hop(int src, int dst) const {
    if (!contains_mode(src) || !contains_mode(dst))
        return SparseOperator::zero(dim());
    const int s = src - n_min_, d = dst - n_min_;
    std::vector<Triplet> t;
    std::vector<int> occ;
    for (int i = 0; i < dim(); ++i) {
        if (states_[i][s] == 0) continue;
        occ = states_[i];
        double amp = std::sqrt(double(occ[s]));
        occ[s] -= 1;
        amp *= std::sqrt(double(occ[d] + 1));
        occ[d] += 1;
        t.push_back({index_of(occ), i, amp});
    }
    return SparseOperator::from_triplets(dim(), std::move(t), OpTag::general);
}

SparseOperator SymmetricFockBasis::cos_op(int n) const {
    return j_plus(n).plus(j_minus(n + 1)).scaled(0.5);
}

SparseOperator SymmetricFockBasis::sin_op(int n) const {
    return j_plus(n).plus(j_minus(n + 1), -1.0).scaled(cxd(0.0, -0.5));
}

CVector SymmetricFockBasis::product_state(const std::map<int, cxd>& amplitudes) const {
    // multinomial expansion of (sum_n c_n b^dag_n)^N |vac> / sqrt(N!)
    double norm2 = 0.0;
    for (const auto& [n, c] : amplitudes) {
        if (!contains_mode(n))
            throw std::invalid_argument("product_state: amplitude outside window");
        norm2 += std::norm(c);
    }
    if (norm2 <= 0.0) throw std::invalid_argument("product_state: zero amplitudes");

    CVector psi = CVector::Zero(dim());
    auto lgamma_int = [](int k) { return std::lgamma(double(k) + 1.0); };
    for (int i = 0; i < dim(); ++i) {
        const auto& occ = states_[i];
        cxd coeff = 1.0;
        double log_multinom = lgamma_int(n_atoms_);
        bool ok = true;
        for (int slot = 0; slot < n_modes() && ok; ++slot) {
            const int m = occ[slot];
            if (m == 0) continue;
            const auto it = amplitudes.find(n_min_ + slot);
            if (it == amplitudes.end()) {
                ok = false;
                break;
            }
            coeff *= std::pow(it->second / std::sqrt(norm2), m);
            log_multinom -= lgamma_int(m);
        }
        if (!ok) continue;
        // amplitude = coeff * N!/(prod m!) / sqrt(N!/(prod m!)) = coeff*sqrt(multinomial)
        psi(i) = coeff * std::exp(0.5 * log_multinom);
    }
    psi.normalize();
    return psi;
}

}  // namespace cavsim
