#include "cavsim/lattice.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cavsim/util.hpp"

namespace cavsim {

SparseOperator build_h_atom(const SymmetricFockBasis& basis, const DerivedQuantities& d) {
    if (basis.n_modes() < 2)
        throw std::invalid_argument("build_h_atom: window needs at least 2 modes");

    const int dim = basis.dim();
    const double b2 = std::norm(d.beta);

    std::vector<Triplet> diag;
    for (int i = 0; i < dim; ++i) {
        double e = 0.0;
        const auto& occ = basis.states()[i];
        for (int slot = 0; slot < basis.n_modes(); ++slot)
            e += kinetic_energy(basis.n_min() + slot, d) * occ[slot];
        if (e != 0.0) diag.push_back({i, i, e});
    }
    SparseOperator h = SparseOperator::from_triplets(dim, std::move(diag), OpTag::hermitian);

    SparseOperator c_sum = SparseOperator::zero(dim);
    SparseOperator drive = SparseOperator::zero(dim);  // sum_m chi_m C_m + zeta_m S_m
    for (int n = basis.n_min(); n <= basis.n_max(); ++n) {
        const SparseOperator cn = basis.cos_op(n);
        c_sum = c_sum.plus(cn);
        const NonlinearRates r = nonlinear_rates(n, d);
        drive = drive.plus(cn, r.chi).plus(basis.sin_op(n), r.zeta);
    }

    h = h.plus(c_sum, -d.u0 * b2);
    h = h.plus(drive.times(c_sum), -1.0);
    return h.symmetrized();
}

SparseOperator build_alpha_jump(const SymmetricFockBasis& basis, const DerivedQuantities& d) {
    const int dim = basis.dim();
    SparseOperator alpha = SparseOperator::zero(dim);
    for (int n = basis.n_min(); n <= basis.n_max(); ++n) {
        const ResponseAmplitude a = response_amplitude(n, d);
        alpha = alpha.plus(basis.j_plus(n), 0.5 * d.beta * a.a_plus);
        alpha = alpha.plus(basis.j_minus(n), 0.5 * d.beta * a.a_minus);
    }
    return alpha.scaled(std::sqrt(d.params.kappa));
}

namespace {

std::string pair_label(int a, int b) {
    std::ostringstream os;
    os << "(" << (a > 0 ? "+" : "") << a << "," << (b > 0 ? "+" : "") << b << ")";
    return os.str();
}

}  // namespace

ValidityReport validity_check(const DerivedQuantities& d, double threshold) {
    ValidityReport rep;
    rep.threshold = threshold;

    const double b2 = std::norm(d.beta);
    const double n0 = d.params.n0;
    // 4 k p0 / m = 16 n0 omega_r for p0 = n0 * 2 hbar k
    const double band_rate = 16.0 * std::abs(n0) * d.omega_r;
    rep.r1 = band_rate > 0.0 ? d.u0 * b2 / band_rate
                             : std::numeric_limits<double>::infinity();

    const NonlinearRates r0 = nonlinear_rates(0, d);
    const double n_atoms = double(d.params.n_atoms);
    rep.r2 = std::max(n_atoms * std::abs(r0.chi), n_atoms * std::abs(r0.zeta)) /
             (8.0 * d.omega_r);
    rep.pass = rep.r1 < threshold && rep.r2 < threshold;

    // Transition ledger: exact two-atom matrix elements of H_a on a window
    // wide enough to hold every listed final state.
    SymmetricFockBasis pair(2, -1, 2);
    const SparseOperator h = build_h_atom(pair, d);
    const CMatrix hd = h.dense();

    auto occ_of = [&](int na, int nb) {
        std::vector<int> occ(pair.n_modes(), 0);
        occ[na - pair.n_min()] += 1;
        occ[nb - pair.n_min()] += 1;
        return occ;
    };
    auto k_of = [&](int na, int nb) {
        return kinetic_energy(na, d) + kinetic_energy(nb, d);
    };

    const std::vector<std::array<int, 4>> transitions = {
        {0, 0, -1, -1}, {0, 0, -1, 1},  {0, 1, -1, 0}, {0, 1, -1, 2},
        {0, 1, 1, 2},   {1, 1, 0, 2},   {1, 1, 2, 2},
    };
    for (const auto& tr : transitions) {
        const int i = pair.index_of(occ_of(tr[0], tr[1]));
        const int j = pair.index_of(occ_of(tr[2], tr[3]));
        BreakingTerm term;
        term.from = pair_label(tr[0], tr[1]);
        term.to = pair_label(tr[2], tr[3]);
        term.rate_hz = std::abs(hd(j, i)) / constants::two_pi;
        term.gap_hz = (k_of(tr[2], tr[3]) - k_of(tr[0], tr[1])) / constants::two_pi;
        rep.breaking_terms.push_back(term);
    }
    return rep;
}

std::string ValidityReport::to_json(const std::string& config_hash) const {
    nlohmann::ordered_json j;
    j["r1"] = r1;
    j["r2"] = r2;
    j["threshold"] = threshold;
    j["pass"] = pass;
    j["breaking_terms"] = nlohmann::ordered_json::array();
    for (const auto& t : breaking_terms)
        j["breaking_terms"].push_back({{"from", t.from},
                                       {"to", t.to},
                                       {"rate_hz", t.rate_hz},
                                       {"gap_hz", t.gap_hz}});
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    j["artifact_version"] = artifact_version;
    return j.dump(2);
}

}  // namespace cavsim
