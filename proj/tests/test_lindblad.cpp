#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cavsim/dipole.hpp"
#include "cavsim/lindblad.hpp"
#include "cavsim/sparse.hpp"

using namespace cavsim;

namespace {

SparseOperator pauli_z() {
    return SparseOperator::from_triplets(2, {{0, 0, 1.0}, {1, 1, -1.0}},
                                         OpTag::hermitian);
}

SparseOperator pauli_x() {
    return SparseOperator::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}},
                                         OpTag::hermitian);
}

}  // namespace

TEST_CASE("zero generator keeps the state") {
    Liouvillian l(SparseOperator::zero(3), {});
    CMatrix rho0 = CMatrix::Zero(3, 3);
    rho0(0, 0) = 0.25;
    rho0(1, 1) = 0.75;
    rho0(0, 1) = rho0(1, 0) = 0.2;
    DensityMatrix d{rho0, 0.0};
    const IntegrationResult res = integrate(l, d, {0.0, 1.0, 2.0});
    for (const auto& st : res.states)
        CHECK((st.rho - rho0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("diagonal Hamiltonian: populations frozen, coherences rotate") {
    const double w = 2.0;
    Liouvillian l(pauli_z().scaled(w / 2.0), {});
    CMatrix rho0(2, 2);
    rho0 << 0.5, 0.5, 0.5, 0.5;
    const IntegrationResult res = integrate(l, {rho0, 0.0}, {0.0, 0.3, 0.9});
    for (const auto& st : res.states) {
        CHECK(st.rho(0, 0).real() == doctest::Approx(0.5).epsilon(1e-9));
        // coherence rotates at the level splitting w
        const cxd want = 0.5 * std::exp(cxd(0.0, -w * st.t));
        CHECK(std::abs(st.rho(0, 1) - want) < 1e-8);
    }
}

TEST_CASE("textbook decay: excited population falls as exp(-kappa t)") {
    const double kappa = 1.7;
    // two-level "photon" space: |1> decays to |0>
    SparseOperator a = SparseOperator::from_triplets(2, {{0, 1, 1.0}});
    std::vector<JumpChannel> jumps;
    jumps.push_back({a.scaled(std::sqrt(kappa)), "decay"});
    Liouvillian l(SparseOperator::zero(2), std::move(jumps));
    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(1, 1) = 1.0;
    const IntegrationResult res = integrate(l, {rho0, 0.0}, {0.0, 0.5, 1.0, 2.0});
    for (const auto& st : res.states)
        CHECK(st.rho(1, 1).real() ==
              doctest::Approx(std::exp(-kappa * st.t)).epsilon(1e-9));
}

TEST_CASE("two-level Rabi problem matches the closed form") {
    const double omega = 3.0;  // H = omega/2 sigma_x
    Liouvillian l(pauli_x().scaled(omega / 2.0), {});
    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    std::vector<double> ts;
    for (int i = 0; i <= 10; ++i) ts.push_back(0.21 * i);
    const IntegrationResult res = integrate(l, {rho0, 0.0}, ts);
    for (const auto& st : res.states) {
        const double want = std::cos(omega * st.t / 2.0) * std::cos(omega * st.t / 2.0);
        CHECK(st.rho(0, 0).real() == doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(res.diag.max_trace_defect < 1e-9);
    CHECK(res.diag.max_hermiticity_defect < 1e-10);
}

TEST_CASE("wavefunction path agrees with the density path") {
    const double omega = 1.3;
    const SparseOperator h = pauli_x().scaled(omega / 2.0);
    CVector psi0(2);
    psi0 << 1.0, 0.0;
    const std::vector<double> ts{0.0, 0.4, 0.8, 1.6};
    const WaveIntegrationResult wr = integrate_state(h, psi0, ts);
    Liouvillian l(h, {});
    const IntegrationResult dr = integrate(l, DensityMatrix::pure(psi0), ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const CMatrix from_psi = wr.states[i] * wr.states[i].adjoint();
        CHECK((from_psi - dr.states[i].rho).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK(wr.max_norm_defect < 1e-9);
}

TEST_CASE("invariants hold along a driven dissipative evolution") {
    // random-ish 4-level problem with two channels
    std::vector<Triplet> th = {{0, 1, cxd(0.4, 0.1)}, {1, 0, cxd(0.4, -0.1)},
                               {1, 2, 0.7}, {2, 1, 0.7}, {2, 3, cxd(0.0, 0.3)},
                               {3, 2, cxd(0.0, -0.3)}, {0, 0, 1.0}, {3, 3, -0.8}};
    SparseOperator h = SparseOperator::from_triplets(4, std::move(th), OpTag::hermitian);
    std::vector<JumpChannel> jumps;
    jumps.push_back({SparseOperator::from_triplets(4, {{0, 2, 0.6}}), "drop"});
    jumps.push_back({SparseOperator::from_triplets(4, {{1, 3, 0.3}}), "drop2"});
    Liouvillian l(h, std::move(jumps));
    CMatrix rho0 = CMatrix::Zero(4, 4);
    rho0(3, 3) = 0.6;
    rho0(2, 2) = 0.4;
    IntegrationResult res = integrate(l, {rho0, 0.0}, {0.0, 1.0, 3.0, 6.0});
    check_positivity(res);
    CHECK(res.diag.max_trace_defect < 1e-9);
    CHECK(res.diag.max_hermiticity_defect < 1e-10);
    CHECK(res.diag.min_eigenvalue > -1e-8);
}

TEST_CASE("halving the tolerance improves accuracy at the integrator order") {
    const double omega = 2.0;
    const SparseOperator h = pauli_x().scaled(omega / 2.0);
    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    const std::vector<double> ts{0.0, 2.0};

    auto err_at = [&](double tol) {
        IntegratorOptions io;
        io.rtol = tol;
        io.atol = tol * 1e-3;
        Liouvillian l(h, {});
        const IntegrationResult res = integrate(l, {rho0, 0.0}, ts, io);
        const double want = std::cos(omega) * std::cos(omega);  // t = 2
        return std::abs(res.states.back().rho(0, 0).real() - want);
    };
    const double e1 = err_at(1e-6);
    const double e2 = err_at(5e-7);
    // local order 5 -> global order ~4-5 in tolerance; require at least
    // the nominal factor-2 gain
    CHECK(e2 < e1 / 2.0 + 1e-15);
}

TEST_CASE("bad inputs are rejected") {
    SparseOperator not_herm = SparseOperator::from_triplets(2, {{0, 1, 1.0}});
    CHECK_THROWS((void)Liouvillian(not_herm, {}));

    SparseOperator h = pauli_z();
    std::vector<JumpChannel> wrong_dim;
    wrong_dim.push_back({SparseOperator::identity(3), "bad"});
    CHECK_THROWS((void)Liouvillian(h, std::move(wrong_dim)));

    Liouvillian ok(pauli_z(), {});
    CMatrix rho0 = CMatrix::Identity(2, 2) * 0.5;
    CHECK_THROWS((void)integrate(ok, {rho0, 0.0}, {0.0, -1.0}));
}

TEST_CASE("dipole pattern moments") {
    const auto cont = dipole_channels(DipolePattern::continuous);
    const auto three = dipole_channels(DipolePattern::three_point);

    // normalization: integral of N(u) du over [-1, 1] is exactly 1
    CHECK(std::abs(recoil_moment(cont, 0) - 1.0) < 1e-12);
    CHECK(std::abs(recoil_moment(three, 0) - 1.0) < 1e-12);

    // first moment vanishes by symmetry
    CHECK(std::abs(recoil_moment(cont, 1)) < 1e-12);
    CHECK(std::abs(recoil_moment(three, 1)) < 1e-12);

    // second moment 2/5 on both sides
    CHECK(std::abs(recoil_moment(cont, 2) - 0.4) < 1e-12);
    CHECK(std::abs(recoil_moment(three, 2) - 0.4) < 1e-12);

    const DipoleDiscretization d = DipoleDiscretization::moment_matched();
    CHECK(d.a == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(d.b == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
    const auto gl = gauss_legendre(16);
    double s0 = 0.0, s2 = 0.0, s6 = 0.0;
    for (const auto& [x, w] : gl) {
        s0 += w;
        s2 += w * x * x;
        s6 += w * std::pow(x, 6);
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(s6 == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
}
