#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>

namespace cavsim {

using cxd = std::complex<double>;

// All frequencies are angular (rad/s) once inside the library.  Config files
// use ordinary Hz / nm / amu; the conversion happens exactly once at parse
// time.

namespace constants {
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double amu = 1.66053906660e-27;  // kg
inline constexpr double two_pi = 6.283185307179586476925286766559;
}  // namespace constants

struct PhysicalParams {
    double g = 0.0;        // atom-cavity coupling (rad/s)
    double kappa = 0.0;    // cavity linewidth (rad/s)
    double gamma = 0.0;    // atomic linewidth (rad/s)
    double eta = 0.0;      // pump rate (rad/s)
    double delta_a = 0.0;  // atom-pump detuning (rad/s)
    std::optional<double> delta_c;        // cavity-pump detuning (rad/s)
    std::optional<double> delta_c_prime;  // dressed detuning (rad/s); either this or delta_c
    double lambda = 0.0;   // transition wavelength (m)
    double mass = 0.0;     // atomic mass (kg)
    int n_atoms = 0;       // N
    double n0 = 0.0;       // mean momentum index (p0 = n0 * 2 hbar k)
    double dispersive_guard = 10.0;  // require |delta_a| > guard * sqrt(N) * g

    // Throws std::invalid_argument when an invariant fails.
    void validate() const;
};

struct DerivedQuantities {
    double omega_r = 0.0;        // recoil frequency hbar k^2 / 2m (rad/s)
    double k = 0.0;              // wavenumber (1/m)
    double u0 = 0.0;             // dispersive coupling (rad/s)
    double delta_c_prime = 0.0;  // dressed detuning (rad/s)
    std::complex<double> beta;   // injected field amplitude
    double omega_z = 0.0;        // two-level splitting K_1 - K_0 (rad/s)
    double c1 = 0.0;             // single-atom cooperativity 4 g^2 / (gamma kappa)
    PhysicalParams params;       // inputs carried along for downstream rates
};

DerivedQuantities derive_quantities(const PhysicalParams& p);

// K_n = 4 omega_r (n - n0)^2
double kinetic_energy(int n, const DerivedQuantities& d);
double kinetic_energy(double n, const DerivedQuantities& d);

// Same parameter set evaluated at a different dressed detuning (beta and
// delta_c move together; everything else is unchanged).
DerivedQuantities with_delta_c_prime(const DerivedQuantities& d, double delta_c_prime);

// Assembles a DerivedQuantities directly from unit-scale values, bypassing
// the physical derivations.  Used by the reference-model oracles and tests
// where rates are specified rather than derived.
DerivedQuantities synthetic_derived(double u0, double omega_r, double n0,
                                    double kappa, double eta, double delta_c_prime,
                                    double gamma, double delta_a, int n_atoms);

// beta = eta / (-delta_c_prime + i kappa / 2)
std::complex<double> injected_field(double eta, double delta_c_prime, double kappa);

// Flat key=value config text ('#' comments, blank lines ignored).
std::map<std::string, std::string> parse_key_value_file(const std::string& path);
std::map<std::string, std::string> parse_key_value_text(const std::string& text);

// Extracts PhysicalParams from parsed config keys (g_hz, kappa_hz, gamma_hz,
// eta_hz, delta_a_hz, delta_c_hz or delta_c_prime_hz, lambda_nm, mass_amu,
// n_atoms, n0, optional dispersive_guard).
PhysicalParams params_from_config(const std::map<std::string, std::string>& kv);

}  // namespace cavsim
