#include "cavsim/spin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cavsim {

DickeOps dicke_ops(int n_atoms) {
    if (n_atoms < 1) throw std::invalid_argument("dicke_ops: need n_atoms >= 1");
    const int dim = n_atoms + 1;
    const double s = 0.5 * n_atoms;

    std::vector<Triplet> tz, tp;
    for (int i = 0; i < dim; ++i) {
        const double m = s - i;
        if (m != 0.0) tz.push_back({i, i, m});
        if (i > 0) {
            // <m+1|J+|m> with m = s - i
            const double amp = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
            tp.push_back({i - 1, i, amp});
        }
    }
    DickeOps ops;
    ops.n_atoms = n_atoms;
    ops.jz = SparseOperator::from_triplets(dim, std::move(tz), OpTag::hermitian);
    ops.jp = SparseOperator::from_triplets(dim, std::move(tp));
    ops.jm = ops.jp.adjoint();
    ops.jx = ops.jp.plus(ops.jm).scaled(0.5).symmetrized();
    ops.jy = ops.jp.plus(ops.jm, -1.0).scaled(cxd(0.0, -0.5)).symmetrized();
    std::vector<Triplet> t2;
    for (int i = 0; i < dim; ++i) t2.push_back({i, i, s * (s + 1.0)});
    ops.j2 = SparseOperator::from_triplets(dim, std::move(t2), OpTag::hermitian);
    return ops;
}

CVector css_x(int n_atoms) { return css(n_atoms, M_PI / 2.0, 0.0); }

CVector css(int n_atoms, double theta, double phi) {
    const int dim = n_atoms + 1;
    CVector v(dim);
    // |theta,phi> = sum_k sqrt(C(N,k)) cos^{N-k}(theta/2) sin^k(theta/2) e^{-i k phi} |m = S-k>
    const double lc = std::cos(theta / 2.0), ls = std::sin(theta / 2.0);
    for (int k = 0; k < dim; ++k) {
        const double lbin = 0.5 * (std::lgamma(n_atoms + 1.0) - std::lgamma(k + 1.0) -
                                   std::lgamma(n_atoms - k + 1.0));
        const double mag = std::exp(lbin + (n_atoms - k) * std::log(std::max(lc, 1e-300)) +
                                    k * std::log(std::max(ls, 1e-300)));
        v(k) = mag * std::exp(cxd(0.0, -phi * k));
    }
    v.normalize();
    return v;
}

TwoLevelRates two_level_rates(const DerivedQuantities& d) {
    TwoLevelRates r;
    r.omega_z = d.omega_z;
    r.u0_beta2 = d.u0 * std::norm(d.beta);
    const NonlinearRates nl = nonlinear_rates(0, d);
    r.chi = nl.chi;
    r.zeta = nl.zeta;
    r.decay = decay_rates(d);
    return r;
}

SparseOperator build_h_eff(const TwoLevelRates& r, int n_atoms) {
    const DickeOps ops = dicke_ops(n_atoms);
    const SparseOperator jx2 = ops.jx.times(ops.jx);
    const SparseOperator xy = ops.jx.times(ops.jy).plus(ops.jy.times(ops.jx));
    return ops.jz.scaled(r.omega_z)
        .plus(ops.jx, -r.u0_beta2)
        .plus(jx2, -r.chi)
        .plus(xy, -0.5 * r.zeta)
        .symmetrized();
}

JumpChannel collective_jump(const TwoLevelRates& r, const DerivedQuantities& d,
                            int n_atoms) {
    const DickeOps ops = dicke_ops(n_atoms);
    const double amp = std::sqrt(d.params.kappa * std::norm(d.beta) / 4.0);
    SparseOperator l = ops.jp.scaled(amp * r.decay.a_plus)
                           .plus(ops.jm.scaled(amp * r.decay.a_minus));
    return {std::move(l), "cavity_collective"};
}

OatModel build_h_oat(const TwoLevelRates& r, int n_atoms) {
    const DickeOps ops = dicke_ops(n_atoms);
    OatModel m;
    m.h = ops.j2.plus(ops.jz.times(ops.jz).symmetrized(), -1.0).scaled(0.5 * r.chi)
              .symmetrized();
    m.jumps.push_back({ops.jp.scaled(std::sqrt(r.decay.gamma_plus)), "collective_raise"});
    m.jumps.push_back({ops.jm.scaled(std::sqrt(r.decay.gamma_minus)), "collective_lower"});
    const double others = std::max({std::abs(r.u0_beta2),
                                    n_atoms * std::abs(r.chi),
                                    n_atoms * std::abs(r.zeta)});
    m.rotating_wave_ok = std::abs(r.omega_z) > 10.0 * others;
    return m;
}

MomentSet analytic_moments(double t, int n_atoms, double chi0, double gamma_l,
                           double gamma_plus, double gamma_minus) {
    const double s = 0.5 * n_atoms;
    const double el = std::exp(-gamma_l * t);
    const double el2 = el * el;
    const double c2 = std::cos(2.0 * chi0 * t);
    const double c1 = std::cos(chi0 * t);

    MomentSet m;
    m.t = t;
    m.var_jy = 0.5 * s * el +
               0.5 * s * (s - 0.5) * (1.0 - std::pow(c2, 2.0 * s - 2.0)) * el2;
    m.var_jz = 0.5 * s * el;
    m.cross = 2.0 * s * (s - 0.5) * std::sin(chi0 * t) * std::pow(c1, 2.0 * s - 2.0) * el2;
    m.mean_jx = s * std::pow(c1, 2.0 * s - 1.0) * el;

    auto tanh_term = [&](double g) {
        const double th = std::tanh(2.0 * s * g * t);
        return s * th * (1.0 - th);
    };
    if (gamma_plus > 0.0) m.var_jz += tanh_term(gamma_plus);
    if (gamma_minus > 0.0) m.var_jz += tanh_term(gamma_minus);
    return m;
}

MomentSet moments_from_state(const DensityMatrix& state, const DickeOps& ops) {
    MomentSet m;
    m.t = state.t;
    const double ey = ops.jy.expectation(state.rho).real();
    const double ez = ops.jz.expectation(state.rho).real();
    m.mean_jx = ops.jx.expectation(state.rho).real();
    m.var_jy = ops.jy.times(ops.jy).expectation(state.rho).real() - ey * ey;
    m.var_jz = ops.jz.times(ops.jz).expectation(state.rho).real() - ez * ez;
    m.cross = ops.jy.times(ops.jz).plus(ops.jz.times(ops.jy)).expectation(state.rho).real() -
              2.0 * ey * ez;
    return m;
}

namespace {

SqueezingResult xi2_from_covariance(double a, double b, double c_full, double jmag2,
                                    int n_atoms, double t) {
    // covariance matrix [[A, C/2], [C/2, B]]; smaller eigenvalue
    const double half_tr = 0.5 * (a + b);
    const double disc = std::sqrt(0.25 * (a - b) * (a - b) + 0.25 * c_full * c_full);
    const double v_minus = half_tr - disc;

    SqueezingResult r;
    r.t = t;
    r.xi2 = n_atoms * v_minus / jmag2;
    // eigenvector angle of the smaller eigenvalue in the (e1, e2) plane
    r.theta_min = 0.5 * std::atan2(c_full, a - b) + M_PI / 2.0;
    r.theta_min = std::fmod(r.theta_min, M_PI);
    if (r.theta_min < 0.0) r.theta_min += M_PI;
    return r;
}

}  // namespace

SqueezingResult xi2_from_state(const DensityMatrix& state, const DickeOps& ops) {
    const double jx = ops.jx.expectation(state.rho).real();
    const double jy = ops.jy.expectation(state.rho).real();
    const double jz = ops.jz.expectation(state.rho).real();
    const double jmag = std::sqrt(jx * jx + jy * jy + jz * jz);
    if (jmag < 1e-12)
        throw std::invalid_argument("xi2_from_state: vanishing mean spin");

    const double n[3] = {jx / jmag, jy / jmag, jz / jmag};
    // orthonormal frame perpendicular to <J>
    double ref[3] = {0.0, 0.0, 1.0};
    if (std::abs(n[2]) > 0.9) ref[0] = 1.0, ref[2] = 0.0;
    double e1[3] = {n[1] * ref[2] - n[2] * ref[1], n[2] * ref[0] - n[0] * ref[2],
                    n[0] * ref[1] - n[1] * ref[0]};
    const double e1n = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (double& x : e1) x /= e1n;
    const double e2[3] = {n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2],
                          n[0] * e1[1] - n[1] * e1[0]};

    auto dir_op = [&](const double* e) {
        return ops.jx.scaled(e[0]).plus(ops.jy, e[1]).plus(ops.jz, e[2]);
    };
    const SparseOperator o1 = dir_op(e1), o2 = dir_op(e2);
    auto cov = [&](const SparseOperator& p, const SparseOperator& q) {
        const double pq = 0.5 * p.times(q).plus(q.times(p)).expectation(state.rho).real();
        return pq - p.expectation(state.rho).real() * q.expectation(state.rho).real();
    };
    const double a = cov(o1, o1), b = cov(o2, o2), c = 2.0 * cov(o1, o2);
    return xi2_from_covariance(a, b, c, jmag * jmag, ops.n_atoms, state.t);
}

SqueezingResult xi2_from_moments(const MomentSet& m, int n_atoms) {
    const double jmag2 = m.mean_jx * m.mean_jx;
    if (jmag2 < 1e-24)
        throw std::invalid_argument("xi2_from_moments: vanishing mean spin");
    return xi2_from_covariance(m.var_jy, m.var_jz, m.cross, jmag2, n_atoms, m.t);
}

SqueezingResult xi2_closed_form(double t, const DerivedQuantities& d, int n_atoms) {
    if (!(t > 0.0)) throw std::invalid_argument("xi2_closed_form: need t > 0");
    const TwoLevelRates r = two_level_rates(d);
    SqueezingResult out;
    out.t = t;
    out.delta_c_prime = d.delta_c_prime;
    const double half_nchit = 0.5 * n_atoms * r.chi * t;
    out.term_coherent = 1.0 / (half_nchit * half_nchit);
    out.term_single = r.decay.gamma_l * t;
    out.term_collective = 2.0 * n_atoms * r.decay.gamma_c * t;
    out.xi2 = out.term_coherent + out.term_single + out.term_collective;
    return out;
}

namespace {

double xi2_value(double t, const DerivedQuantities& d, int n_atoms, bool no_gamma_l) {
    const TwoLevelRates r = two_level_rates(d);
    const double half_nchit = 0.5 * n_atoms * r.chi * t;
    const double gl = no_gamma_l ? 0.0 : r.decay.gamma_l;
    return 1.0 / (half_nchit * half_nchit) + gl * t +
           2.0 * n_atoms * r.decay.gamma_c * t;
}

// Golden-section minimization; f assumed unimodal on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double rel_tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while ((b - a) > rel_tol * (std::abs(a) + std::abs(b)) * 0.5) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

OptimizeResult optimize(const DerivedQuantities& d, int n_atoms,
                        const OptimizeOptions& opts) {
    OptimizeOptions o = opts;
    if (o.delta_min == 0.0 && o.delta_max == 0.0) {
        o.delta_min = 0.02 * constants::two_pi * 1e6;
        o.delta_max = 10.0 * constants::two_pi * 1e6;
    }
    if (!(o.delta_max > o.delta_min) || o.delta_points < 2 || o.t_points < 2 ||
        !(o.t_max > o.t_min))
        throw std::invalid_argument("optimize: bad search ranges");

    auto value = [&](double delta, double t) {
        return xi2_value(t, with_delta_c_prime(d, delta), n_atoms, o.force_gamma_l_zero);
    };

    // coarse grid: log-spaced t, linear delta, both sign branches of delta
    std::vector<double> deltas, ts;
    for (int i = 0; i < o.delta_points; ++i) {
        const double mag =
            o.delta_min + (o.delta_max - o.delta_min) * i / double(o.delta_points - 1);
        deltas.push_back(mag);
        deltas.push_back(-mag);
    }
    for (int j = 0; j < o.t_points; ++j)
        ts.push_back(o.t_min * std::pow(o.t_max / o.t_min, j / double(o.t_points - 1)));

    double best = std::numeric_limits<double>::infinity();
    double best_delta = deltas.front(), best_t = ts.front();
    for (double delta : deltas)
        for (double t : ts) {
            const double v = value(delta, t);
            const bool better =
                v < best * (1.0 - 1e-12) ||
                (std::abs(v - best) <= best * 1e-12 &&
                 (std::abs(delta) < std::abs(best_delta) ||
                  (std::abs(delta) == std::abs(best_delta) && t < best_t)));
            if (better) {
                best = v;
                best_delta = delta;
                best_t = t;
            }
        }

    // coordinate golden-section refinement around the best cell
    const double dstep = (o.delta_max - o.delta_min) / double(o.delta_points - 1);
    const double tfac = std::pow(o.t_max / o.t_min, 1.0 / double(o.t_points - 1));
    double delta_lo = best_delta - 2.0 * dstep, delta_hi = best_delta + 2.0 * dstep;
    double t_lo = best_t / (tfac * tfac), t_hi = best_t * tfac * tfac;
    for (int sweep = 0; sweep < 4; ++sweep) {
        best_delta = golden_min([&](double x) { return value(x, best_t); },
                                delta_lo, delta_hi, o.tol);
        best_t = golden_min([&](double x) { return value(best_delta, x); },
                            t_lo, t_hi, o.tol);
        delta_lo = best_delta - 0.5 * dstep;
        delta_hi = best_delta + 0.5 * dstep;
        t_lo = best_t / std::sqrt(tfac);
        t_hi = best_t * std::sqrt(tfac);
    }

    OptimizeResult r;
    r.t_opt = best_t;
    r.delta_opt = best_delta;
    r.xi2_opt = value(best_delta, best_t);

    const PhysicalParams& p = d.params;
    r.t_asym = 4.0 * std::cbrt(2.0 * double(n_atoms) * n_atoms *
                               std::pow(p.delta_a, 5) * std::pow(p.kappa, 4) /
                               (d.u0 * std::pow(p.gamma, 5) * std::pow(p.eta, 6)));
    r.delta_asym = std::sqrt(2.0 * n_atoms * d.u0 * p.delta_a * p.kappa / p.gamma);
    r.xi2_asym = 3.0 * std::cbrt(2.0 * p.gamma * p.kappa / (n_atoms * d.u0 * p.delta_a));
    r.xi2_asym_coop = 3.0 / std::cbrt(double(n_atoms) * d.c1);
    r.gap_t = std::abs(r.t_opt - r.t_asym) / r.t_asym;
    r.gap_delta = std::abs(std::abs(r.delta_opt) - r.delta_asym) / r.delta_asym;
    r.gap_xi2 = std::abs(r.xi2_opt - r.xi2_asym) / r.xi2_asym;
    return r;
}

}  // namespace cavsim
