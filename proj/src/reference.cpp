#include "cavsim/reference.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cavsim/dipole.hpp"
#include "cavsim/lattice.hpp"
#include "cavsim/response.hpp"
#include "cavsim/util.hpp"

namespace cavsim {

namespace {

SparseOperator photon_annihilation(int cutoff) {
    std::vector<Triplet> t;
    for (int n = 1; n <= cutoff; ++n) t.push_back({n - 1, n, std::sqrt(double(n))});
    return SparseOperator::from_triplets(cutoff + 1, std::move(t));
}

CVector coherent_state(int cutoff, const cxd& beta) {
    CVector v(cutoff + 1);
    cxd amp = 1.0;
    for (int n = 0; n <= cutoff; ++n) {
        v(n) = amp;
        amp *= beta / std::sqrt(double(n + 1));
    }
    v.normalize();
    return v;
}

CVector kron_vec(const CVector& a, const CVector& b) {
    CVector out(a.size() * b.size());
    for (long i = 0; i < a.size(); ++i)
        for (long j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
    return out;
}

void check_caps(int n_atoms, int photon_cutoff, int modes, int dim,
                const ReferenceCaps& caps) {
    std::ostringstream os;
    if (n_atoms > caps.max_atoms)
        os << "n_atoms " << n_atoms << " exceeds the desk-scale cap " << caps.max_atoms;
    else if (photon_cutoff > caps.max_photon_cutoff)
        os << "photon cutoff " << photon_cutoff << " exceeds the cap "
           << caps.max_photon_cutoff;
    else if (modes > caps.max_momentum_modes)
        os << "momentum window of " << modes << " modes exceeds the cap "
           << caps.max_momentum_modes;
    else if (dim > caps.max_dim)
        os << "total dimension " << dim << " exceeds the cap " << caps.max_dim;
    else
        return;
    throw std::invalid_argument("reference model: " + os.str());
}

}  // namespace

OrgModel::OrgModel(const OrgParams& p) : p_(p) {
    if (p.fine_sites < 3 || p.fine_sites % 2 == 0)
        throw std::invalid_argument("OrgModel: fine_sites must be odd and >= 3");
    const int pd = p.photon_cutoff + 1;
    const int md = p.fine_sites;
    int dim = pd;
    for (int i = 0; i < p.n_atoms; ++i) dim *= 2 * md;
    check_caps(p.n_atoms, p.photon_cutoff, md, dim, p.caps);

    // factors: [int_1, mom_1, ..., int_N, mom_N, photon]
    for (int i = 0; i < p.n_atoms; ++i) {
        space_.dims.push_back(2);
        space_.dims.push_back(md);
    }
    space_.dims.push_back(pd);
    const std::size_t photon_factor = space_.dims.size() - 1;

    // single-atom building blocks (internal basis: 0 = g, 1 = e)
    SparseOperator ee = SparseOperator::from_triplets(2, {{1, 1, 1.0}}, OpTag::hermitian);
    SparseOperator sp = SparseOperator::from_triplets(2, {{1, 0, 1.0}});  // |e><g|
    std::vector<Triplet> tk, tcos;
    for (int j = 0; j < md; ++j) {
        // site j holds momentum (j - md/2) hbar k; kinetic (p - p0)^2/2m
        const double dp_hk = double(j - md / 2) - 2.0 * p.n0;
        tk.push_back({j, j, p.omega_r * dp_hk * dp_hk});
        if (j + 1 < md) {
            tcos.push_back({j, j + 1, 0.5});
            tcos.push_back({j + 1, j, 0.5});
        }
    }
    SparseOperator kin = SparseOperator::from_triplets(md, std::move(tk), OpTag::hermitian);
    SparseOperator coskz = SparseOperator::from_triplets(md, std::move(tcos), OpTag::hermitian);

    const SparseOperator a = photon_annihilation(p.photon_cutoff);
    a_photon_ = space_.embed(photon_factor, a);
    const SparseOperator num_ph = space_.embed(photon_factor, a.adjoint().times(a).symmetrized());

    // H = delta_a sum |e><e| + delta_c n_ph + eta (a + a^dag)
    //     + sum_mu [kinetic_mu + g cos(k z_mu)(sigma+_mu a + h.c.)]
    // (ground-state energy gauged to zero)
    SparseOperator h = num_ph.scaled(p.delta_c)
                           .plus(a_photon_.plus(a_photon_.adjoint()).symmetrized(), p.eta);
    excited_op_ = SparseOperator::zero(dim);
    for (int mu = 0; mu < p.n_atoms; ++mu) {
        const std::size_t fi = 2 * mu, fm = 2 * mu + 1;
        excited_op_ = excited_op_.plus(space_.embed(fi, ee));
        h = h.plus(space_.embed(fi, ee), p.delta_a);
        h = h.plus(space_.embed(fm, kin));
        const SparseOperator coupling =
            space_.embed(fi, sp).times(space_.embed(fm, coskz)).times(a_photon_);
        h = h.plus(coupling.plus(coupling.adjoint()), p.g);
    }
    h_ = h.symmetrized();

    // observables
    const int n_coarse = (md + 1) / 2;
    for (int c = 0; c < n_coarse; ++c) {
        const int site = 2 * c;  // even fine sites are the 2 hbar k grid
        SparseOperator acc = SparseOperator::zero(dim);
        for (int mu = 0; mu < p.n_atoms; ++mu) {
            SparseOperator proj = SparseOperator::from_triplets(
                md, {{site, site, 1.0}}, OpTag::hermitian);
            acc = acc.plus(space_.embed(2 * mu + 1, proj));
        }
        coarse_pop_ops_.push_back(acc.scaled(1.0 / p.n_atoms).symmetrized());
    }
    SparseOperator odd = SparseOperator::zero(dim);
    for (int mu = 0; mu < p.n_atoms; ++mu) {
        std::vector<Triplet> t;
        for (int j = 1; j < md; j += 2) t.push_back({j, j, 1.0});
        odd = odd.plus(space_.embed(2 * mu + 1,
                                    SparseOperator::from_triplets(md, std::move(t),
                                                                  OpTag::hermitian)));
    }
    odd_pop_op_ = odd.scaled(1.0 / p.n_atoms).symmetrized();
    top_photon_op_ = space_.embed(photon_factor,
                                  SparseOperator::from_triplets(
                                      pd, {{pd - 1, pd - 1, 1.0}}, OpTag::hermitian));
    excited_op_ = excited_op_.symmetrized();
}

std::vector<JumpChannel> OrgModel::jumps(bool spontaneous_emission) const {
    std::vector<JumpChannel> out;
    if (p_.kappa > 0.0)
        out.push_back({a_photon_.scaled(std::sqrt(p_.kappa)), "cavity_decay"});
    if (spontaneous_emission && p_.gamma > 0.0) {
        // three-point recoil channels; +-1 recoils are single fine-grid hops
        const int md = p_.fine_sites;
        for (const RecoilChannel& ch : dipole_channels(DipolePattern::three_point)) {
            const int shift = int(std::lround(ch.u));
            std::vector<Triplet> t;
            for (int j = 0; j < md; ++j) {
                const int j2 = j - shift;  // exp(-i k z u) lowers momentum by u
                if (j2 >= 0 && j2 < md) t.push_back({j2, j, 1.0});
            }
            const SparseOperator shift_op =
                SparseOperator::from_triplets(md, std::move(t));
            SparseOperator sm = SparseOperator::from_triplets(2, {{0, 1, 1.0}});
            for (int mu = 0; mu < p_.n_atoms; ++mu) {
                SparseOperator l = space_.embed(2 * mu, sm)
                                       .times(space_.embed(2 * mu + 1, shift_op))
                                       .scaled(std::sqrt(p_.gamma * ch.weight));
                std::ostringstream label;
                label << "recoil_u" << shift << "_atom" << mu;
                out.push_back({std::move(l), label.str()});
            }
        }
    }
    return out;
}

CVector OrgModel::initial_state(const cxd& beta) const {
    const int md = p_.fine_sites;
    CVector atom_int = CVector::Zero(2);
    atom_int(0) = 1.0;  // ground
    CVector atom_mom = CVector::Zero(md);
    atom_mom(md / 2) = 1.0 / std::sqrt(2.0);      // 0 hbar k
    if (md / 2 + 2 >= md)
        throw std::invalid_argument("OrgModel: window too small for the +2hk site");
    atom_mom(md / 2 + 2) = 1.0 / std::sqrt(2.0);  // +2 hbar k

    CVector psi = CVector::Ones(1);
    for (int mu = 0; mu < p_.n_atoms; ++mu) {
        psi = kron_vec(psi, atom_int);
        psi = kron_vec(psi, atom_mom);
    }
    return kron_vec(psi, coherent_state(p_.photon_cutoff, beta));
}

double OrgModel::excited_population(const CVector& psi) const {
    return excited_op_.expectation(psi).real();
}

std::vector<double> OrgModel::coarse_populations(const CVector& psi) const {
    std::vector<double> out;
    for (const auto& op : coarse_pop_ops_) out.push_back(op.expectation(psi).real());
    return out;
}

double OrgModel::odd_site_population(const CVector& psi) const {
    return odd_pop_op_.expectation(psi).real();
}

double OrgModel::top_photon_population(const CVector& psi) const {
    return top_photon_op_.expectation(psi).real();
}

AfModel::AfModel(const AfParams& p)
    : p_(p), basis_(p.n_atoms, p.n_min, p.n_max) {
    const int pd = p.photon_cutoff + 1;
    check_caps(p.n_atoms, p.photon_cutoff, basis_.n_modes(), basis_.dim() * pd, p.caps);

    const SparseOperator a = photon_annihilation(p.photon_cutoff);
    const SparseOperator id_at = SparseOperator::identity(basis_.dim());
    a_photon_ = kron(id_at, a);
    const SparseOperator num_ph = kron(id_at, a.adjoint().times(a).symmetrized());

    std::vector<Triplet> tk;
    for (int i = 0; i < basis_.dim(); ++i) {
        double e = 0.0;
        for (int slot = 0; slot < basis_.n_modes(); ++slot) {
            const double dn = double(p.n_min + slot) - p.n0;
            e += 4.0 * p.omega_r * dn * dn * basis_.states()[i][slot];
        }
        if (e != 0.0) tk.push_back({i, i, e});
    }
    SparseOperator kin =
        SparseOperator::from_triplets(basis_.dim(), std::move(tk), OpTag::hermitian);

    SparseOperator c_sum = SparseOperator::zero(basis_.dim());
    for (int n = p.n_min; n <= p.n_max; ++n) c_sum = c_sum.plus(basis_.cos_op(n));

    const SparseOperator nph_small = a.adjoint().times(a).symmetrized();
    SparseOperator h = num_ph.scaled(p.delta_c_prime)
                           .plus(a_photon_.plus(a_photon_.adjoint()).symmetrized(), p.eta)
                           .plus(kron(kin, SparseOperator::identity(pd)))
                           .plus(kron(c_sum.symmetrized(), nph_small), -p.u0);
    h_ = h.symmetrized();
}

std::vector<JumpChannel> AfModel::jumps() const {
    std::vector<JumpChannel> out;
    if (p_.kappa > 0.0)
        out.push_back({a_photon_.scaled(std::sqrt(p_.kappa)), "cavity_decay"});
    return out;
}

CVector AfModel::initial_state(const cxd& beta) const {
    const CVector atoms = basis_.product_state({{0, 1.0}, {1, 1.0}});
    return kron_vec(atoms, coherent_state(p_.photon_cutoff, beta));
}

DensityMatrix AfModel::initial_density(const cxd& beta) const {
    return DensityMatrix::pure(initial_state(beta));
}

CMatrix AfModel::reduce_to_atoms(const CMatrix& rho_full) const {
    const int da = basis_.dim(), dp = p_.photon_cutoff + 1;
    CMatrix out = CMatrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            for (int p = 0; p < dp; ++p) out(i, j) += rho_full(i * dp + p, j * dp + p);
    return out;
}

std::vector<double> AfModel::mode_populations(const CMatrix& rho_full) const {
    const CMatrix rat = reduce_to_atoms(rho_full);
    std::vector<double> out;
    for (int n = p_.n_min; n <= p_.n_max; ++n)
        out.push_back(basis_.number_op(n).expectation(rat).real());
    return out;
}

std::vector<double> AfModel::mode_populations(const CVector& psi) const {
    return mode_populations(CMatrix(psi * psi.adjoint()));
}

double AfModel::grating_coherence(const CMatrix& rho_full) const {
    const CMatrix rat = reduce_to_atoms(rho_full);
    return std::abs(basis_.hop(0, 1).expectation(rat));
}

double AfModel::top_photon_population(const CMatrix& rho_full) const {
    const int da = basis_.dim(), dp = p_.photon_cutoff + 1;
    double acc = 0.0;
    for (int i = 0; i < da; ++i) acc += rho_full(i * dp + dp - 1, i * dp + dp - 1).real();
    return acc;
}

std::string EliminationReport::to_json_line() const {
    nlohmann::ordered_json j;
    j["observable"] = observable;
    j["ratio"] = ratio;
    j["max_dev"] = max_dev;
    j["slope"] = slope;
    return j.dump();
}

double fit_loglog_slope(const std::vector<double>& ratios,
                        const std::vector<double>& deviations) {
    if (ratios.size() != deviations.size() || ratios.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need matched series");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double x = std::log(ratios[i]);
        const double y = std::log(std::max(deviations[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<EliminationReport> compare_excited_state_elimination(
    const ExcitedElimOptions& opts) {
    std::vector<double> ratios, devs;
    std::vector<EliminationReport> reports;

    for (const double ratio : opts.ratios) {
        const double g = opts.g;
        const double delta_a = ratio * g;
        const double omega_r = opts.omega_r_over_g * g;
        const double u0 = g * g / (2.0 * delta_a);  // gamma = 0 here
        const double delta_c = opts.delta_c_over_g * g;
        // one atom: dressed detuning shifts by U0
        const double delta_cp = delta_c - u0;
        const double eta = opts.beta_mag * std::abs(cxd(-delta_cp, 0.0));
        const cxd beta = eta / cxd(-delta_cp, 0.0);

        OrgParams op;
        op.n_atoms = 1;
        op.photon_cutoff = opts.photon_cutoff;
        op.fine_sites = opts.fine_sites;
        op.g = g;
        op.delta_a = delta_a;
        op.delta_c = delta_c;
        op.eta = eta;
        op.omega_r = omega_r;
        OrgModel hi(op);

        AfParams ap;
        ap.n_atoms = 1;
        ap.photon_cutoff = opts.photon_cutoff;
        // coarse window spans the even fine sites
        ap.n_min = -(opts.fine_sites / 4);
        ap.n_max = opts.fine_sites / 4;
        ap.u0 = u0;
        ap.delta_c_prime = delta_cp;
        ap.eta = eta;
        ap.omega_r = omega_r;
        AfModel lo(ap);

        const double drive = u0 * std::norm(beta);
        const double t_final = opts.drive_phase / drive;
        std::vector<double> t_grid;
        for (int i = 0; i < opts.n_times; ++i)
            t_grid.push_back(t_final * i / double(opts.n_times - 1));

        IntegratorOptions io;
        io.rtol = opts.tol;
        io.atol = opts.tol * 1e-2;
        const WaveIntegrationResult whi =
            integrate_state(hi.hamiltonian(), hi.initial_state(beta), t_grid, io);
        const WaveIntegrationResult wlo =
            integrate_state(lo.hamiltonian(), lo.initial_state(beta), t_grid, io);

        double dev = 0.0;
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const std::vector<double> p_hi = hi.coarse_populations(whi.states[i]);
            const std::vector<double> p_lo = lo.mode_populations(wlo.states[i]);
            for (std::size_t c = 0; c < p_hi.size(); ++c)
                dev = std::max(dev, std::abs(p_hi[c] - p_lo[c]));
        }
        ratios.push_back(std::sqrt(double(op.n_atoms)) * g / delta_a);
        devs.push_back(dev);
    }

    const double slope = fit_loglog_slope(ratios, devs);
    for (std::size_t i = 0; i < ratios.size(); ++i)
        reports.push_back({"momentum_populations", ratios[i], devs[i], slope});
    return reports;
}

std::vector<EliminationReport> compare_cavity_elimination(const CavityElimOptions& opts) {
    std::vector<double> ratios;
    std::vector<double> devs_pop, devs_coh;

    for (const double scale : opts.delta_scales) {
        const double delta_cp = opts.delta_c_prime_base * scale;
        const double eta = opts.beta_mag * std::abs(cxd(-delta_cp, opts.kappa / 2.0));
        const cxd beta = injected_field(eta, delta_cp, opts.kappa);

        AfParams ap;
        ap.n_atoms = opts.n_atoms;
        ap.photon_cutoff = opts.photon_cutoff;
        ap.n_min = opts.n_min;
        ap.n_max = opts.n_max;
        ap.u0 = opts.u0;
        ap.delta_c_prime = delta_cp;
        ap.eta = eta;
        ap.kappa = opts.kappa;
        ap.omega_r = opts.omega_r;
        AfModel hi(ap);

        // atom-only model with the same window, via the lattice builders
        const DerivedQuantities d = synthetic_derived(
            opts.u0, opts.omega_r, 0.0, opts.kappa, eta, delta_cp,
            /*gamma=*/0.0, /*delta_a=*/1e9, opts.n_atoms);

        SymmetricFockBasis basis(opts.n_atoms, opts.n_min, opts.n_max);
        const SparseOperator h_lo = build_h_atom(basis, d);
        std::vector<JumpChannel> jumps_lo;
        jumps_lo.push_back({build_alpha_jump(basis, d), "cavity_response"});

        std::vector<double> t_grid;
        for (int i = 0; i < opts.n_times; ++i)
            t_grid.push_back(opts.t_final * i / double(opts.n_times - 1));

        IntegratorOptions io;
        io.rtol = opts.tol;
        io.atol = opts.tol * 1e-2;

        Liouvillian liou_hi(hi.hamiltonian(), hi.jumps());
        const IntegrationResult rhi = integrate(liou_hi, hi.initial_density(beta), t_grid, io);

        Liouvillian liou_lo(h_lo, jumps_lo);
        const CVector psi_at = basis.product_state({{0, 1.0}, {1, 1.0}});
        const IntegrationResult rlo =
            integrate(liou_lo, DensityMatrix::pure(psi_at), t_grid, io);

        double dev_pop = 0.0, dev_coh = 0.0;
        const SparseOperator coh_op = basis.hop(0, 1);
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const std::vector<double> p_hi = hi.mode_populations(rhi.states[i].rho);
            std::vector<double> p_lo;
            for (int n = opts.n_min; n <= opts.n_max; ++n)
                p_lo.push_back(basis.number_op(n).expectation(rlo.states[i].rho).real());
            for (std::size_t c = 0; c < p_hi.size(); ++c)
                dev_pop = std::max(dev_pop, std::abs(p_hi[c] - p_lo[c]));
            const double g_hi = hi.grating_coherence(rhi.states[i].rho);
            const double g_lo = std::abs(coh_op.expectation(rlo.states[i].rho));
            dev_coh = std::max(dev_coh, std::abs(g_hi - g_lo));
        }
        ratios.push_back(opts.n_atoms * opts.u0 / std::abs(cxd(delta_cp, -opts.kappa / 2.0)));
        devs_pop.push_back(dev_pop);
        devs_coh.push_back(dev_coh);
    }

    std::vector<double> dev_max(ratios.size());
    for (std::size_t i = 0; i < ratios.size(); ++i)
        dev_max[i] = std::max(devs_pop[i], devs_coh[i]);
    const double slope = fit_loglog_slope(ratios, dev_max);

    std::vector<EliminationReport> reports;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        reports.push_back({"mode_populations", ratios[i], devs_pop[i], slope});
        reports.push_back({"grating_coherence", ratios[i], devs_coh[i], slope});
    }
    return reports;
}

}  // namespace cavsim
