#pragma once

#include <vector>

#include "cavsim/lindblad.hpp"
#include "cavsim/params.hpp"
#include "cavsim/response.hpp"
#include "cavsim/sparse.hpp"

namespace cavsim {

// Permutation-symmetric spin-N/2 ladder, dimension N+1, ordered by
// decreasing J_z eigenvalue (m = S, S-1, ..., -S).
struct DickeOps {
    int n_atoms = 0;
    SparseOperator jz, jp, jm, jx, jy, j2;
};

DickeOps dicke_ops(int n_atoms);

// Coherent spin state along +x.
CVector css_x(int n_atoms);

// Coherent spin state along an arbitrary Bloch direction (theta from +z,
// azimuth phi).
CVector css(int n_atoms, double theta, double phi);

// Everything the two-level Hamiltonians need, bundled from the response
// and decay formulas at n in {0, +1}.
struct TwoLevelRates {
    double omega_z = 0.0;
    double u0_beta2 = 0.0;  // U0 |beta|^2
    double chi = 0.0;
    double zeta = 0.0;
    DecayRates decay;
};

TwoLevelRates two_level_rates(const DerivedQuantities& d);

// H_eff/hbar = omega_z Jz - U0|beta|^2 Jx - chi Jx^2 - zeta/2 (Jx Jy + Jy Jx)
SparseOperator build_h_eff(const TwoLevelRates& r, int n_atoms);
// L_c = sqrt(kappa |beta|^2/4) (A+ J+ + A- J-)
JumpChannel collective_jump(const TwoLevelRates& r, const DerivedQuantities& d, int n_atoms);

// H_OAT = chi (J^2 - Jz^2)/2 with channels sqrt(Gamma+-) J+-.
struct OatModel {
    SparseOperator h;
    std::vector<JumpChannel> jumps;
    bool rotating_wave_ok = true;  // omega_z dominant; warn-only check
};
OatModel build_h_oat(const TwoLevelRates& r, int n_atoms);

struct MomentSet {
    double var_jy = 0.0;
    double var_jz = 0.0;
    double cross = 0.0;    // <{Jy, Jz}>
    double mean_jx = 0.0;
    double t = 0.0;
};

// Closed-form moments for H = chi0 Jz^2 from a +x coherent state, with
// e^{-gamma_l t} loss envelopes and the collective-decay addition
// T(Gamma+-) = S tanh(2 S Gamma t)(1 - tanh(2 S Gamma t)) on var_jz.
// chi0 is the Jz^2 coefficient (the two-level reduction uses chi0 = -chi/2).
MomentSet analytic_moments(double t, int n_atoms, double chi0, double gamma_l,
                           double gamma_plus, double gamma_minus);

MomentSet moments_from_state(const DensityMatrix& state, const DickeOps& ops);

struct SqueezingResult {
    double xi2 = 0.0;
    double theta_min = 0.0;  // optimal quadrature angle in [0, pi)
    double t = 0.0;
    double delta_c_prime = 0.0;
    double term_coherent = 0.0;
    double term_single = 0.0;
    double term_collective = 0.0;
};

// xi^2 = N V_- / |<J>|^2 from the 2x2 covariance matrix in the plane
// perpendicular to <J>.  Throws when |<J>| vanishes.
SqueezingResult xi2_from_state(const DensityMatrix& state, const DickeOps& ops);

// Same quantity from a MomentSet (state polarized along x; covariance block
// spanned by Jy, Jz).
SqueezingResult xi2_from_moments(const MomentSet& m, int n_atoms);

// xi^2 = 1/(N chi t / 2)^2 + gamma_l t + 2 N Gamma_c t
SqueezingResult xi2_closed_form(double t, const DerivedQuantities& d, int n_atoms);

struct OptimizeOptions {
    double delta_min = 0.0;   // rad/s; 0 -> default range
    double delta_max = 0.0;
    int delta_points = 181;
    double t_min = 1e-7;      // s
    double t_max = 1e-2;
    int t_points = 121;
    bool force_gamma_l_zero = false;
    double tol = 1e-10;       // golden-section relative width
};

struct OptimizeResult {
    double t_opt = 0.0;
    double delta_opt = 0.0;
    double xi2_opt = 0.0;
    // closed asymptotics and their relative gaps to the numeric optimum
    double t_asym = 0.0;
    double delta_asym = 0.0;
    double xi2_asym = 0.0;       // 3 (2 gamma kappa / (N U0 delta_a))^{1/3}
    double xi2_asym_coop = 0.0;  // 3 (N C1)^{-1/3}
    double gap_t = 0.0;
    double gap_delta = 0.0;
    double gap_xi2 = 0.0;
};

// Coarse grid over (t, delta_c') followed by coordinate golden-section
// refinement of the closed form.  Ties prefer smaller |delta| then smaller t.
OptimizeResult optimize(const DerivedQuantities& d, int n_atoms,
                        const OptimizeOptions& opts = {});

}  // namespace cavsim
