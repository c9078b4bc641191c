#pragma once

#include <string>
#include <vector>

#include "cavsim/fock_basis.hpp"
#include "cavsim/params.hpp"
#include "cavsim/response.hpp"

namespace cavsim {

// Atom-only many-body Hamiltonian on the momentum window,
//   H_a/hbar = sum_n K_n n_n - U0|beta|^2 C_n - sum_{n,m} (chi_m C_m + zeta_m S_m) C_n,
// globally symmetrized H <- (H + H^dag)/2 so the m = n sine-cosine products
// become the anticommutator form of the two-level reduction.
SparseOperator build_h_atom(const SymmetricFockBasis& basis, const DerivedQuantities& d);

// Collective cavity jump sqrt(kappa) * alpha_hat,
//   alpha_hat = beta sum_n (A_n^+ J+_n + A_n^- J-_n)/2.
SparseOperator build_alpha_jump(const SymmetricFockBasis& basis, const DerivedQuantities& d);

struct BreakingTerm {
    std::string from;   // e.g. "(0,0)"
    std::string to;     // e.g. "(-1,+1)"
    double rate_hz;     // |<to|H_a|from>| / 2pi, two-atom representative element
    double gap_hz;      // (K_to - K_from) / 2pi
};

struct ValidityReport {
    double r1 = 0.0;  // U0|beta|^2 / (4 k p0 / m)
    double r2 = 0.0;  // max(N|chi|, N|zeta|) / (8 omega_r)
    double threshold = 0.1;
    bool pass = false;
    std::vector<BreakingTerm> breaking_terms;

    std::string to_json(const std::string& config_hash = "") const;
};

// Two-level validity margins plus the ledger of transitions that leave the
// {0,+1} manifold, with exact matrix elements taken from a two-atom window.
ValidityReport validity_check(const DerivedQuantities& d, double threshold = 0.1);

}  // namespace cavsim
