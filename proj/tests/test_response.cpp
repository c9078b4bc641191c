#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cavsim/params.hpp"
#include "cavsim/response.hpp"

using namespace cavsim;

namespace {

PhysicalParams rb87_params(double delta_c_prime_hz = -2e6) {
    PhysicalParams p;
    p.g = constants::two_pi * 0.5e6;
    p.kappa = constants::two_pi * 0.055e6;
    p.gamma = constants::two_pi * 6.066e6;
    p.eta = constants::two_pi * 10e6;
    p.delta_a = constants::two_pi * 150e6;
    p.delta_c_prime = constants::two_pi * delta_c_prime_hz;
    p.lambda = 780e-9;
    p.mass = 86.909180527 * constants::amu;
    p.n_atoms = 3000;
    p.n0 = 15.0;
    // the Rb-87 set sits at |delta_a|/(sqrt(N) g) ~ 5.5
    p.dispersive_guard = 5.0;
    return p;
}

}  // namespace

TEST_CASE("response amplitude against the defining formula") {
    const DerivedQuantities d = derive_quantities(rb87_params());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-6e6, 6e6);
    for (int rep = 0; rep < 100; ++rep) {
        const double delta = constants::two_pi * u(rng);
        const int n = int(rng() % 41) - 10;
        const DerivedQuantities dd = with_delta_c_prime(d, delta);
        const ResponseAmplitude a = response_amplitude(n, dd);
        const double kn = kinetic_energy(n, dd);
        const cxd want_p =
            dd.u0 / cxd(delta + kinetic_energy(n + 1, dd) - kn, -dd.params.kappa / 2.0);
        const cxd want_m =
            dd.u0 / cxd(delta + kinetic_energy(n - 1, dd) - kn, -dd.params.kappa / 2.0);
        CHECK(std::abs(a.a_plus - want_p) <= 1e-15 * std::abs(want_p));
        CHECK(std::abs(a.a_minus - want_m) <= 1e-15 * std::abs(want_m));
        // Lorentzian peak bound
        CHECK(std::abs(a.a_plus) <= 2.0 * dd.u0 / dd.params.kappa * (1.0 + 1e-12));
        CHECK(std::abs(a.a_minus) <= 2.0 * dd.u0 / dd.params.kappa * (1.0 + 1e-12));
    }
}

TEST_CASE("off-resonant suppression and peak condition") {
    const DerivedQuantities d = derive_quantities(rb87_params());
    SUBCASE("1/delta tail") {
        double prev = 1e9;
        for (double mhz : {10.0, 20.0, 40.0, 80.0}) {
            const DerivedQuantities dd =
                with_delta_c_prime(d, constants::two_pi * mhz * 1e6);
            const double mag = std::abs(response_amplitude(0, dd).a_plus);
            CHECK(mag < prev);
            prev = mag;
            CHECK(mag == doctest::Approx(d.u0 / (constants::two_pi * mhz * 1e6))
                             .epsilon(0.01));
        }
    }
    SUBCASE("resonant peak reaches 2 U0/kappa") {
        const int n = 3;
        const double gap = kinetic_energy(n + 1, d) - kinetic_energy(n, d);
        const DerivedQuantities dd = with_delta_c_prime(d, -gap);
        CHECK(std::abs(response_amplitude(n, dd).a_plus) ==
              doctest::Approx(2.0 * d.u0 / d.params.kappa));
    }
}

TEST_CASE("response amplitude regression fixture") {
    // n = 0, delta_c' = -2pi x 5 MHz, Rb-87 set with n0 = 15
    const DerivedQuantities d =
        derive_quantities(rb87_params(-5e6));
    const ResponseAmplitude a = response_amplitude(0, d);
    CHECK(a.a_plus.real() == doctest::Approx(-1.5318441955815664e-4).epsilon(1e-12));
    CHECK(a.a_plus.imag() == doctest::Approx(7.7469680027075092e-7).epsilon(1e-12));
    CHECK(a.a_minus.real() == doctest::Approx(-1.837912356027243e-4).epsilon(1e-12));
    CHECK(a.a_minus.imag() == doctest::Approx(1.1152110112376466e-6).epsilon(1e-12));

    const NonlinearRates r = nonlinear_rates(0, d);
    CHECK(r.chi == doctest::Approx(-3.5145239697615871).epsilon(1e-12));
    CHECK(r.zeta == doctest::Approx(3.4103346415883573e-3).epsilon(1e-12));
}

TEST_CASE("nonlinear rates agree with direct evaluation to 1e-12") {
    const DerivedQuantities base = derive_quantities(rb87_params());
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3e6, 3e6);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = int(rng() % 31);
        const DerivedQuantities d = with_delta_c_prime(base, constants::two_pi * u(rng));
        const NonlinearRates r = nonlinear_rates(n, d);
        const double b2 = std::norm(d.beta);
        const double kn = kinetic_energy(n, d);
        const double kn1 = kinetic_energy(n + 1, d);
        const cxd ap = d.u0 / cxd(d.delta_c_prime + kn1 - kn, -d.params.kappa / 2.0);
        const cxd am = d.u0 / cxd(d.delta_c_prime + kn - kn1, -d.params.kappa / 2.0);
        const double chi = 0.5 * d.u0 * b2 * (ap + am).real();
        const double zeta = 0.5 * d.u0 * b2 * (am - ap).imag();
        CHECK(r.chi == doctest::Approx(chi).epsilon(1e-12));
        CHECK(r.zeta == doctest::Approx(zeta).epsilon(1e-12));
    }
}

TEST_CASE("zeta vanishes as kappa -> 0 off resonance") {
    PhysicalParams p = rb87_params();
    double prev = 1e9;
    for (double kap : {0.055e6, 0.0055e6, 0.00055e6}) {
        p.kappa = constants::two_pi * kap;
        const DerivedQuantities d = derive_quantities(p);
        const NonlinearRates r = nonlinear_rates(0, d);
        CHECK(std::abs(r.zeta) < prev);
        prev = std::abs(r.zeta);
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("two-level chi equals the n = 0 grid value") {
    const DerivedQuantities d = derive_quantities(rb87_params());
    const NonlinearRates grid_rate = nonlinear_rates(0, d);
    // two-level amplitudes A^pm = U0/(delta +- omega_z - i kappa/2)
    const DecayRates dec = decay_rates(d);
    const double chi_two_level =
        0.5 * d.u0 * std::norm(d.beta) * (dec.a_plus + dec.a_minus).real();
    CHECK(grid_rate.chi == doctest::Approx(chi_two_level).epsilon(1e-12));
}

TEST_CASE("decay rates") {
    const DerivedQuantities d = derive_quantities(rb87_params());
    SUBCASE("beta = 0 kills all four rates") {
        PhysicalParams p = rb87_params();
        p.eta = 0.0;
        const DecayRates r = decay_rates(derive_quantities(p));
        CHECK(r.gamma_plus == 0.0);
        CHECK(r.gamma_minus == 0.0);
        CHECK(r.gamma_c == 0.0);
        CHECK(r.gamma_l == 0.0);
    }
    SUBCASE("detuning sign swap exchanges Gamma+ and Gamma-") {
        const double delta = constants::two_pi * 1.3e6;
        const DecayRates rp = decay_rates(with_delta_c_prime(d, delta + d.omega_z));
        // at delta_c' = x + omega_z vs x - omega_z the two Lorentzians swap
        const DecayRates rm = decay_rates(with_delta_c_prime(d, delta - d.omega_z));
        // |beta|^2 differs between the two points; compare normalized rates
        const double bp = std::norm(with_delta_c_prime(d, delta + d.omega_z).beta);
        const double bm = std::norm(with_delta_c_prime(d, delta - d.omega_z).beta);
        CHECK(rp.gamma_plus / bp == doctest::Approx(rm.gamma_minus / bm).epsilon(1e-12));
        CHECK(rp.gamma_minus / bp == doctest::Approx(rm.gamma_plus / bm).epsilon(1e-12));
    }
    SUBCASE("gamma_c stores Gamma+ + Gamma-") {
        const DecayRates r = decay_rates(d);
        CHECK(r.gamma_c == r.gamma_plus + r.gamma_minus);
        CHECK(r.gamma_l == doctest::Approx(d.params.gamma * d.u0 * std::norm(d.beta) /
                                           (2.0 * d.params.delta_a)));
    }
}

TEST_CASE("balanced-decoherence detuning matches the closed form to 10%") {
    const DerivedQuantities d = derive_quantities(rb87_params());
    const double bal = balanced_detuning(d, constants::two_pi * 0.8e6,
                                         constants::two_pi * 8e6);
    const double asym = std::sqrt(2.0 * 3000.0 * d.u0 * d.params.delta_a *
                                  d.params.kappa / d.params.gamma);
    CHECK(std::abs(bal - asym) / asym < 0.10);
    // at the root the two sides really balance
    const DecayRates r = decay_rates(with_delta_c_prime(d, bal));
    CHECK(r.gamma_l == doctest::Approx(2.0 * 3000.0 * r.gamma_c).epsilon(1e-8));
}

TEST_CASE("rate grid consistency and structure") {
    const DerivedQuantities d = derive_quantities(rb87_params());

    SUBCASE("single cell equals the pointwise rates") {
        const RateGrid g = rate_grid(7, 7, -constants::two_pi * 1e6,
                                     -constants::two_pi * 1e6, 1, d);
        REQUIRE(g.cells.size() == 1);
        const NonlinearRates r =
            nonlinear_rates(7, with_delta_c_prime(d, -constants::two_pi * 1e6));
        CHECK(g.cells[0].chi == doctest::Approx(r.chi));
        CHECK(g.cells[0].zeta == doctest::Approx(r.zeta));
    }

    SUBCASE("|chi| is approximately even about the two-pole midpoint") {
        // poles sit at +-(K_{n+1} - K_n); midpoint is 0 detuning
        const int n = 25;
        for (double mhz : {2.0, 2.5, 3.0}) {
            const double delta = constants::two_pi * mhz * 1e6;  // > 100 kappa away
            const double plus =
                std::abs(nonlinear_rates(n, with_delta_c_prime(d, delta)).chi);
            const double minus =
                std::abs(nonlinear_rates(n, with_delta_c_prime(d, -delta)).chi);
            CHECK(std::abs(plus - minus) / std::max(plus, minus) < 0.05);
        }
    }

    SUBCASE("peak |chi_n| matches U0^2 |beta|^2 / (2 kappa)") {
        // scan finely around the A^- pole of chi_25 (away from beta's own peak)
        const int n = 25;
        const double gap = kinetic_energy(n + 1, d) - kinetic_energy(n, d);
        double best = 0.0;
        double best_delta = 0.0;
        for (int i = -400; i <= 400; ++i) {
            const double delta = gap + i * d.params.kappa / 100.0;
            const double v =
                std::abs(nonlinear_rates(n, with_delta_c_prime(d, delta)).chi);
            if (v > best) {
                best = v;
                best_delta = delta;
            }
        }
        const double b2 = std::norm(with_delta_c_prime(d, best_delta).beta);
        const double want = d.u0 * d.u0 * b2 / (2.0 * d.params.kappa);
        // kappa/gap corrections ~ kappa/(2 gap)
        CHECK(std::abs(best - want) / want < 3.0 * d.params.kappa / std::abs(gap));
    }

    SUBCASE("refined grid near one resonance has half-width kappa/2") {
        // Re A^- has a dispersive shape around the pole; |chi| therefore has
        // two lobes at +-kappa/2 whose half-maximum points sit near
        // delta - gap = kappa/2 +- kappa/2 * sqrt(2)-ish.  Fit the lobe width
        // via the distance between the maximum and the outer half-max point:
        // for f(x) = x/(x^2 + (kappa/2)^2), f(x_max + w_half) = f_max/2 at
        // w_half = (2 + sqrt(3) - 1) kappa/2 ... checked numerically instead:
        // assert the fitted Lorentzian scale is kappa/2 within 5%.
        const int n = 25;
        const double gap = kinetic_energy(n + 1, d) - kinetic_energy(n, d);
        auto lobe = [&](double x) {
            return std::abs(
                nonlinear_rates(n, with_delta_c_prime(d, gap + x)).chi);
        };
        // peak of x/(x^2+s^2) sits at x = s where s = kappa/2
        double best_x = 0.0, best = 0.0;
        for (int i = 1; i <= 300; ++i) {
            const double x = i * d.params.kappa / 200.0;
            if (lobe(x) > best) {
                best = lobe(x);
                best_x = x;
            }
        }
        CHECK(std::abs(best_x - d.params.kappa / 2.0) / (d.params.kappa / 2.0) < 0.05);
    }
}
