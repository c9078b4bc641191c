#pragma once

#include <string>
#include <vector>

#include "cavsim/sparse.hpp"

namespace cavsim {

struct DensityMatrix {
    CMatrix rho;
    double t = 0.0;

    static DensityMatrix pure(const CVector& psi, double t = 0.0);

    int dim() const { return int(rho.rows()); }
    double trace_real() const { return rho.trace().real(); }
    double trace_defect() const { return std::abs(rho.trace() - cxd(1.0, 0.0)); }
    double hermiticity_defect() const;
    double min_eigenvalue() const;
};

struct JumpChannel {
    SparseOperator op;
    std::string label;
};

// rho_dot = -i[H, rho] + sum_j (L rho L^dag - {L^dag L, rho}/2)
class Liouvillian {
public:
    Liouvillian(SparseOperator h, std::vector<JumpChannel> jumps,
                double hermiticity_tol = 1e-12);

    int dim() const { return dim_; }
    const SparseOperator& hamiltonian() const { return h_; }
    std::size_t n_jumps() const { return jumps_.size(); }

    // out and rho are dim x dim row-major; out is overwritten.
    void apply(const cxd* rho, cxd* out) const;

private:
    struct PreparedJump {
        SparseOperator l;
        SparseOperator l_adj;
        SparseOperator ldl;  // L^dag L
    };
    int dim_;
    SparseOperator h_;
    std::vector<PreparedJump> jumps_;
    mutable std::vector<cxd> tmp_;
};

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 0.0;    // 0 -> heuristic
    double min_step_fraction = 1e-14;  // of the total span
    std::size_t max_steps = 200'000'000;
};

struct InvariantDiagnostics {
    double max_trace_defect = 0.0;
    double max_hermiticity_defect = 0.0;
    double min_eigenvalue = 1.0;   // over checked states
    double max_norm_defect = 0.0;  // wavefunction runs
};

struct IntegrationResult {
    std::vector<DensityMatrix> states;  // one per grid time
    std::size_t steps = 0;
    std::size_t rejected = 0;
    InvariantDiagnostics diag;          // eigenvalue check done on demand
};

// Deterministic adaptive Dormand-Prince 5(4).  No per-step trace
// renormalization; drift shows up in the diagnostics.  Throws
// std::runtime_error with the failing time on step-size underflow.
IntegrationResult integrate(const Liouvillian& l, const DensityMatrix& rho0,
                            const std::vector<double>& t_grid,
                            const IntegratorOptions& opts = {});

struct WaveIntegrationResult {
    std::vector<CVector> states;
    std::vector<double> times;
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_norm_defect = 0.0;
};

// Schroedinger-picture state-vector path for jump-free problems.
WaveIntegrationResult integrate_state(const SparseOperator& h, const CVector& psi0,
                                      const std::vector<double>& t_grid,
                                      const IntegratorOptions& opts = {});

// Fills diag.min_eigenvalue by full diagonalization of each state.
void check_positivity(IntegrationResult& result);

}  // namespace cavsim
