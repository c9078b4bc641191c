#include "cavsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cavsim/kernels.hpp"

namespace cavsim {

DensityMatrix DensityMatrix::pure(const CVector& psi, double t) {
    DensityMatrix d;
    d.rho = psi * psi.adjoint() / psi.squaredNorm();
    d.t = t;
    return d;
}

double DensityMatrix::hermiticity_defect() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (Eigen::MatrixXcd(rho) + Eigen::MatrixXcd(rho).adjoint()),
        Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Liouvillian::Liouvillian(SparseOperator h, std::vector<JumpChannel> jumps,
                         double hermiticity_tol)
    : dim_(h.dim()), h_(std::move(h)) {
    if (h_.tag() != OpTag::hermitian)
        throw std::invalid_argument("Liouvillian: Hamiltonian must be hermitian-tagged");
    if (h_.hermiticity_defect() > hermiticity_tol)
        throw std::invalid_argument("Liouvillian: Hamiltonian fails the hermiticity check");
    for (auto& j : jumps) {
        if (j.op.dim() != dim_)
            throw std::invalid_argument("Liouvillian: jump dimension mismatch ('" +
                                        j.label + "')");
        PreparedJump pj;
        pj.l_adj = j.op.adjoint();
        pj.ldl = pj.l_adj.times(j.op);
        pj.l = std::move(j.op);
        jumps_.push_back(std::move(pj));
    }
    tmp_.resize(std::size_t(dim_) * dim_);
}

void Liouvillian::apply(const cxd* rho, cxd* out) const {
    const std::size_t sz = std::size_t(dim_) * dim_;
    kernels::zero(out, sz);
    h_.add_mul_left(cxd(0.0, -1.0), rho, out, dim_);
    h_.add_mul_right(cxd(0.0, 1.0), rho, out, dim_);
    for (const auto& j : jumps_) {
        kernels::zero(tmp_.data(), sz);
        j.l.add_mul_left(1.0, rho, tmp_.data(), dim_);
        j.l_adj.add_mul_right(1.0, tmp_.data(), out, dim_);
        j.ldl.add_mul_left(-0.5, rho, out, dim_);
        j.ldl.add_mul_right(-0.5, rho, out, dim_);
    }
}

namespace detail {

// Dormand-Prince 5(4) with FSAL.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

// rhs(y, out): evaluates dy/dt.  Integrates to every grid point exactly.
template <class Rhs, class Observer>
void dopri5_run(const Rhs& rhs, std::vector<cxd>& y, double t0,
                const std::vector<double>& t_grid, const IntegratorOptions& opts,
                std::size_t& steps, std::size_t& rejected, const Observer& at_grid) {
    using K = Dopri5;
    const std::size_t n = y.size();
    const auto& ops = kernels::active();

    std::vector<cxd> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n),
        ynew(n), err(n);

    double tend = t_grid.empty() ? t0 : t_grid.back();
    const double span = std::max(std::abs(tend - t0), 1e-300);
    const double hmin = std::max(span * opts.min_step_fraction, 1e-300);

    double t = t0;
    rhs(y.data(), k1.data());  // FSAL seed
    double h = opts.initial_step;
    if (h <= 0.0) {
        // start conservatively; the controller expands quickly
        double f0 = 0.0, y0 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            f0 = std::max(f0, std::abs(k1[i]));
            y0 = std::max(y0, std::abs(y[i]));
        }
        h = f0 > 0.0 ? 0.01 * (opts.atol + opts.rtol * y0) / (opts.rtol * f0 + opts.atol / span)
                     : span * 1e-6;
        h = std::min(std::max(h, hmin), span);
    }

    std::size_t grid_pos = 0;
    // emit any grid points equal to t0
    while (grid_pos < t_grid.size() && t_grid[grid_pos] <= t0) {
        at_grid(t_grid[grid_pos], y);
        ++grid_pos;
    }

    while (grid_pos < t_grid.size()) {
        const double target = t_grid[grid_pos];
        const bool clipped = t + h >= target;
        const double hstep = clipped ? target - t : h;

        auto stage = [&](std::vector<cxd>& out, std::initializer_list<std::pair<const std::vector<cxd>*, double>> terms) {
            kernels::copy(y.data(), out.data(), n);
            for (const auto& [kv, a] : terms)
                if (a != 0.0) ops.axpy(hstep * a, kv->data(), out.data(), n);
        };

        stage(ytmp, {{&k1, K::a21}});
        rhs(ytmp.data(), k2.data());
        stage(ytmp, {{&k1, K::a31}, {&k2, K::a32}});
        rhs(ytmp.data(), k3.data());
        stage(ytmp, {{&k1, K::a41}, {&k2, K::a42}, {&k3, K::a43}});
        rhs(ytmp.data(), k4.data());
        stage(ytmp, {{&k1, K::a51}, {&k2, K::a52}, {&k3, K::a53}, {&k4, K::a54}});
        rhs(ytmp.data(), k5.data());
        stage(ytmp, {{&k1, K::a61}, {&k2, K::a62}, {&k3, K::a63}, {&k4, K::a64}, {&k5, K::a65}});
        rhs(ytmp.data(), k6.data());

        kernels::copy(y.data(), ynew.data(), n);
        ops.axpy(hstep * K::b1, k1.data(), ynew.data(), n);
        ops.axpy(hstep * K::b3, k3.data(), ynew.data(), n);
        ops.axpy(hstep * K::b4, k4.data(), ynew.data(), n);
        ops.axpy(hstep * K::b5, k5.data(), ynew.data(), n);
        ops.axpy(hstep * K::b6, k6.data(), ynew.data(), n);
        rhs(ynew.data(), k7.data());

        kernels::zero(err.data(), n);
        ops.axpy(hstep * K::e1, k1.data(), err.data(), n);
        ops.axpy(hstep * K::e3, k3.data(), err.data(), n);
        ops.axpy(hstep * K::e4, k4.data(), err.data(), n);
        ops.axpy(hstep * K::e5, k5.data(), err.data(), n);
        ops.axpy(hstep * K::e6, k6.data(), err.data(), n);
        ops.axpy(hstep * K::e7, k7.data(), err.data(), n);

        const double enorm =
            kernels::error_norm(err.data(), y.data(), ynew.data(), n, opts.atol, opts.rtol);

        if (++steps > opts.max_steps) {
            std::ostringstream os;
            os << "integrate: exceeded max step count at t = " << t;
            throw std::runtime_error(os.str());
        }

        const bool accepted = enorm <= 1.0;
        if (accepted) {
            t += hstep;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            if (clipped) {
                at_grid(target, y);
                ++grid_pos;
            }
        } else {
            ++rejected;
        }

        // A successful clipped step keeps the controller's suggestion for the
        // next segment; otherwise rescale from the step just attempted.
        if (!clipped || !accepted) {
            const double factor =
                enorm > 0.0 ? std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0) : 5.0;
            h = std::max(hstep * factor, hmin);
            if (!accepted && hstep <= hmin * (1.0 + 1e-12)) {
                std::ostringstream os;
                os << "integrate: step size underflow at t = " << t;
                throw std::runtime_error(os.str());
            }
        }
    }
}

}  // namespace detail

IntegrationResult integrate(const Liouvillian& l, const DensityMatrix& rho0,
                            const std::vector<double>& t_grid,
                            const IntegratorOptions& opts) {
    if (rho0.dim() != l.dim())
        throw std::invalid_argument("integrate: state dimension mismatch");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("integrate: t_grid must be strictly increasing");
    if (!t_grid.empty() && t_grid.front() < rho0.t)
        throw std::invalid_argument("integrate: t_grid starts before the state time");

    const int dim = l.dim();
    const std::size_t sz = std::size_t(dim) * dim;
    std::vector<cxd> y(rho0.rho.data(), rho0.rho.data() + sz);

    IntegrationResult out;
    out.states.reserve(t_grid.size());

    auto rhs = [&](const cxd* in, cxd* o) { l.apply(in, o); };
    auto observer = [&](double t, const std::vector<cxd>& state) {
        DensityMatrix d;
        d.rho = Eigen::Map<const CMatrix>(state.data(), dim, dim);
        d.t = t;
        out.diag.max_trace_defect = std::max(out.diag.max_trace_defect, d.trace_defect());
        out.diag.max_hermiticity_defect =
            std::max(out.diag.max_hermiticity_defect, d.hermiticity_defect());
        out.states.push_back(std::move(d));
    };
    detail::dopri5_run(rhs, y, rho0.t, t_grid, opts, out.steps, out.rejected, observer);
    return out;
}

WaveIntegrationResult integrate_state(const SparseOperator& h, const CVector& psi0,
                                      const std::vector<double>& t_grid,
                                      const IntegratorOptions& opts) {
    if (h.dim() != psi0.size())
        throw std::invalid_argument("integrate_state: dimension mismatch");
    if (h.tag() != OpTag::hermitian)
        throw std::invalid_argument("integrate_state: Hamiltonian must be hermitian-tagged");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("integrate_state: t_grid must be strictly increasing");

    std::vector<cxd> y(psi0.data(), psi0.data() + psi0.size());
    WaveIntegrationResult out;

    auto rhs = [&](const cxd* in, cxd* o) {
        kernels::zero(o, y.size());
        h.add_apply(cxd(0.0, -1.0), in, o);
    };
    auto observer = [&](double t, const std::vector<cxd>& state) {
        CVector psi = Eigen::Map<const CVector>(state.data(), long(state.size()));
        out.max_norm_defect =
            std::max(out.max_norm_defect, std::abs(psi.squaredNorm() - 1.0));
        out.states.push_back(std::move(psi));
        out.times.push_back(t);
    };
    detail::dopri5_run(rhs, y, t_grid.empty() ? 0.0 : t_grid.front(), t_grid, opts,
                       out.steps, out.rejected, observer);
    return out;
}

void check_positivity(IntegrationResult& result) {
    for (const auto& s : result.states)
        result.diag.min_eigenvalue =
            std::min(result.diag.min_eigenvalue, s.min_eigenvalue());
}

}  // namespace cavsim
