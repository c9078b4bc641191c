#pragma once

#include <utility>
#include <vector>

namespace cavsim {

// Dipole radiation pattern N(u) = (3/8)(1 + u^2) for u = cos(theta).

enum class DipolePattern { continuous, three_point };

// One emission direction: 'weight' is the fraction of gamma carried by the
// channel, 'u' the recoil along z in units of hbar k.
struct RecoilChannel {
    double weight;
    double u;
};

// Endpoint / center weights of the three-point discretization, chosen so the
// zeroth and second recoil moments match the continuous pattern (the first
// vanishes by symmetry on both sides).
struct DipoleDiscretization {
    double a = 0.0;  // weight at u = +-1
    double b = 0.0;  // weight at u = 0

    static DipoleDiscretization moment_matched(int quadrature_nodes = 16);
};

// Gauss-Legendre nodes/weights on [-1, 1].
std::vector<std::pair<double, double>> gauss_legendre(int n);

double dipole_pattern(double u);

// continuous: N(u_j) w_j over a fixed-order quadrature (default 16 nodes);
// three_point: {A at -1, B at 0, A at +1}.
std::vector<RecoilChannel> dipole_channels(DipolePattern mode, int quadrature_nodes = 16);

// sum_j weight_j * u_j^k
double recoil_moment(const std::vector<RecoilChannel>& channels, int k);

}  // namespace cavsim
