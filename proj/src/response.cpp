#include "cavsim/response.hpp"

#include <cmath>
#include <stdexcept>

#include "cavsim/util.hpp"

namespace cavsim {

ResponseAmplitude response_amplitude(int n, const DerivedQuantities& d) {
    const double kn = kinetic_energy(n, d);
    const cxd denom_p(d.delta_c_prime + (kinetic_energy(n + 1, d) - kn),
                      -d.params.kappa / 2.0);
    const cxd denom_m(d.delta_c_prime + (kinetic_energy(n - 1, d) - kn),
                      -d.params.kappa / 2.0);
    return {d.u0 / denom_p, d.u0 / denom_m, n};
}

NonlinearRates nonlinear_rates(int n, const DerivedQuantities& d) {
    const double b2 = std::norm(d.beta);
    const cxd ap_n = response_amplitude(n, d).a_plus;
    const cxd am_n1 = response_amplitude(n + 1, d).a_minus;
    NonlinearRates r;
    r.n = n;
    r.chi = 0.5 * d.u0 * b2 * std::real(ap_n + am_n1);
    r.zeta = 0.5 * d.u0 * b2 * std::imag(am_n1 - ap_n);
    return r;
}

DecayRates decay_rates(const DerivedQuantities& d) {
    const double b2 = std::norm(d.beta);
    DecayRates r;
    r.a_plus = d.u0 / cxd(d.delta_c_prime + d.omega_z, -d.params.kappa / 2.0);
    r.a_minus = d.u0 / cxd(d.delta_c_prime - d.omega_z, -d.params.kappa / 2.0);
    r.gamma_plus = d.params.kappa * b2 * std::norm(r.a_plus) / 4.0;
    r.gamma_minus = d.params.kappa * b2 * std::norm(r.a_minus) / 4.0;
    r.gamma_c = r.gamma_plus + r.gamma_minus;
    r.gamma_l = d.params.gamma * d.u0 * b2 / (2.0 * d.params.delta_a);
    return r;
}

RateGrid rate_grid(int n_min, int n_max, double delta_min, double delta_max,
                   int n_delta, const DerivedQuantities& d, int threads) {
    if (n_max < n_min) throw std::invalid_argument("rate_grid: empty n range");
    if (n_delta < 1) throw std::invalid_argument("rate_grid: empty delta range");

    RateGrid grid;
    for (int n = n_min; n <= n_max; ++n) grid.n_values.push_back(n);
    for (int j = 0; j < n_delta; ++j)
        grid.delta_values.push_back(
            n_delta == 1 ? delta_min
                         : delta_min + (delta_max - delta_min) * j / double(n_delta - 1));

    grid.cells.resize(grid.n_values.size() * grid.delta_values.size());
    parallel_for(grid.n_values.size(), threads, [&](std::size_t row) {
        const int n = grid.n_values[row];
        for (std::size_t j = 0; j < grid.delta_values.size(); ++j) {
            const DerivedQuantities dd = with_delta_c_prime(d, grid.delta_values[j]);
            const NonlinearRates r = nonlinear_rates(n, dd);
            grid.cells[row * grid.delta_values.size() + j] =
                {n, grid.delta_values[j], r.chi, r.zeta};
        }
    });
    return grid;
}

double balanced_detuning(const DerivedQuantities& d, double lo, double hi) {
    auto f = [&](double delta) {
        const DerivedQuantities dd = with_delta_c_prime(d, delta);
        const DecayRates r = decay_rates(dd);
        return r.gamma_l - 2.0 * double(d.params.n_atoms) * r.gamma_c;
    };
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("balanced_detuning: bracket does not straddle a root");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace cavsim
