#pragma once

#include <string>
#include <vector>

#include "cavsim/fock_basis.hpp"
#include "cavsim/lindblad.hpp"
#include "cavsim/params.hpp"
#include "cavsim/sparse.hpp"

namespace cavsim {

// Desk-scale guards for the exact reference models.
struct ReferenceCaps {
    int max_atoms = 3;
    int max_photon_cutoff = 6;
    int max_momentum_modes = 7;
    int max_dim = 4096;
};

// Pre-elimination model: internal states + photons + fine momentum grid
// (hbar k steps, so cos(k z) hops one site).  Atoms are kept distinguishable;
// the symmetric initial state keeps the dynamics in the symmetric sector.
struct OrgParams {
    int n_atoms = 1;
    int photon_cutoff = 4;       // max Fock occupation; dimension cutoff+1
    int fine_sites = 5;          // centered on 2*n0 in hbar k units
    double g = 0.0;              // rad/s
    double delta_a = 0.0;        // rad/s
    double delta_c = 0.0;        // rad/s (bare detuning)
    double eta = 0.0;            // rad/s
    double kappa = 0.0;          // 0 -> no cavity jump
    double gamma = 0.0;          // 0 -> no spontaneous emission channels
    double omega_r = 0.0;        // rad/s
    double n0 = 0.0;
    ReferenceCaps caps;
};

class OrgModel {
public:
    explicit OrgModel(const OrgParams& p);

    const SparseOperator& hamiltonian() const { return h_; }
    std::vector<JumpChannel> jumps(bool spontaneous_emission = false) const;
    int dim() const { return space_.dim(); }

    // |g> atoms in (|0> + |+2hbar k>)/sqrt(2), cavity in the truncated
    // coherent state closest to beta.
    CVector initial_state(const cxd& beta) const;

    // total excited population, coarse-grid momentum populations averaged
    // over atoms, and the odd-fine-site population (elimination leakage)
    double excited_population(const CVector& psi) const;
    std::vector<double> coarse_populations(const CVector& psi) const;
    double odd_site_population(const CVector& psi) const;
    double top_photon_population(const CVector& psi) const;

    int n_coarse_modes() const { return (p_.fine_sites + 1) / 2; }
    const OrgParams& params() const { return p_; }

private:
    OrgParams p_;
    TensorSpace space_;       // [internal, momentum] per atom + photon last
    SparseOperator h_;
    std::vector<SparseOperator> coarse_pop_ops_;
    SparseOperator odd_pop_op_;
    SparseOperator excited_op_;
    SparseOperator top_photon_op_;
    SparseOperator a_photon_;  // embedded annihilation operator
};

// Post-elimination atom-field model on the 2 hbar k grid with photons.
struct AfParams {
    int n_atoms = 1;
    int photon_cutoff = 4;
    int n_min = -1;
    int n_max = 1;
    double u0 = 0.0;            // rad/s
    double delta_c_prime = 0.0; // rad/s
    double eta = 0.0;           // rad/s
    double kappa = 0.0;
    double omega_r = 0.0;
    double n0 = 0.0;
    ReferenceCaps caps;
};

class AfModel {
public:
    explicit AfModel(const AfParams& p);

    const SparseOperator& hamiltonian() const { return h_; }
    std::vector<JumpChannel> jumps() const;
    int dim() const { return basis_.dim() * (p_.photon_cutoff + 1); }
    const SymmetricFockBasis& basis() const { return basis_; }

    // symmetric two-mode superposition (modes 0 and 1) x coherent(beta)
    CVector initial_state(const cxd& beta) const;
    DensityMatrix initial_density(const cxd& beta) const;

    // atomic observables (per-mode populations, |<b1^dag b0>|)
    std::vector<double> mode_populations(const CMatrix& rho_full) const;
    std::vector<double> mode_populations(const CVector& psi) const;
    double grating_coherence(const CMatrix& rho_full) const;
    double top_photon_population(const CMatrix& rho_full) const;

    CMatrix reduce_to_atoms(const CMatrix& rho_full) const;

    const AfParams& params() const { return p_; }

private:
    AfParams p_;
    SymmetricFockBasis basis_;
    SparseOperator h_;
    SparseOperator a_photon_;
};

struct EliminationReport {
    std::string observable;
    double ratio = 0.0;     // small parameter of the elimination
    double max_dev = 0.0;   // max |<O>_hi - <O>_lo| over the grid
    double slope = 0.0;     // fitted log-log slope, shared across the series
    std::string to_json_line() const;
};

double fit_loglog_slope(const std::vector<double>& ratios,
                        const std::vector<double>& deviations);

struct ExcitedElimOptions {
    std::vector<double> ratios = {100.0, 200.0, 400.0};  // delta_a / g
    double g = 1.0;           // rad/s scale
    double omega_r_over_g = 0.05;
    double delta_c_over_g = 2.0;
    double beta_mag = 0.5;
    int photon_cutoff = 4;
    int fine_sites = 5;
    double drive_phase = 0.15;  // evolution time in units of 1/(U0 |beta|^2)
    int n_times = 40;
    double tol = 1e-9;
};

// Eq.(1) vs Eq.(2): pure-Hamiltonian comparison of momentum populations.
std::vector<EliminationReport> compare_excited_state_elimination(
    const ExcitedElimOptions& opts = {});

struct CavityElimOptions {
    std::vector<double> delta_scales = {1.0, 2.0, 4.0};
    double omega_r = 1.0;     // rad/s scale
    double u0 = 5.0;
    double delta_c_prime_base = 100.0;
    double kappa = 20.0;
    double beta_mag = 0.5;
    int n_atoms = 2;
    int photon_cutoff = 4;
    int n_min = -1;
    int n_max = 2;
    double t_final = 2.0;
    int n_times = 15;
    double tol = 1e-9;
};

// Atom-field model vs atom-only model: open-system comparison of atomic
// observables as the response amplitude shrinks.
std::vector<EliminationReport> compare_cavity_elimination(
    const CavityElimOptions& opts = {});

}  // namespace cavsim
