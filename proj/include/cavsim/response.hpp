#pragma once

#include <complex>
#include <vector>

#include "cavsim/params.hpp"

namespace cavsim {

// Cavity response to the motion of momentum family n.
// A_n^pm = U0 / (delta_c' + (K_{n+-1} - K_n) - i kappa/2)
struct ResponseAmplitude {
    std::complex<double> a_plus;
    std::complex<double> a_minus;
    int n = 0;
};

// chi_n = U0|beta|^2/2 Re(A_n^+ + A_{n+1}^-)
// zeta_n = U0|beta|^2/2 Im(A_{n+1}^- - A_n^+)
struct NonlinearRates {
    double chi = 0.0;   // rad/s
    double zeta = 0.0;  // rad/s
    int n = 0;
};

// Two-level collective decay and single-particle loss.
// Gamma_pm = kappa |beta|^2 |A^pm|^2 / 4 with A^pm = U0/(delta_c' +- omega_z - i kappa/2)
// gamma_c stores Gamma_+ + Gamma_-; the squeezing penalty is always written
// as 2 N t gamma_c.
struct DecayRates {
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    double gamma_c = 0.0;
    double gamma_l = 0.0;
    std::complex<double> a_plus;
    std::complex<double> a_minus;
};

ResponseAmplitude response_amplitude(int n, const DerivedQuantities& d);
NonlinearRates nonlinear_rates(int n, const DerivedQuantities& d);
DecayRates decay_rates(const DerivedQuantities& d);

struct RateCell {
    int n;
    double delta_c_prime;  // rad/s
    double chi;            // rad/s
    double zeta;           // rad/s
};

struct RateGrid {
    std::vector<int> n_values;
    std::vector<double> delta_values;  // rad/s
    std::vector<RateCell> cells;       // row-major over (n, delta)
};

// Dense (n, delta_c') table of the nonlinear rates; rows may be computed in
// parallel, output order is deterministic.
RateGrid rate_grid(int n_min, int n_max, double delta_min, double delta_max,
                   int n_delta, const DerivedQuantities& d, int threads = 0);

// Root of gamma_l = 2 N Gamma_c on [lo, hi] by bisection (the balanced-
// decoherence detuning).  Throws if the bracket does not straddle a root.
double balanced_detuning(const DerivedQuantities& d, double lo, double hi);

}  // namespace cavsim
