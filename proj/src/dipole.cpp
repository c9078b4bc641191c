#include "cavsim/dipole.hpp"

#include <cmath>
#include <stdexcept>

namespace cavsim {

std::vector<std::pair<double, double>> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
    std::vector<std::pair<double, double>> out(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev-based initial guess
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        out[i] = {x, 2.0 / ((1.0 - x * x) * pp * pp)};
    }
    return out;
}

double dipole_pattern(double u) { return 0.375 * (1.0 + u * u); }

DipoleDiscretization DipoleDiscretization::moment_matched(int quadrature_nodes) {
    // 2A + B = m0,  2A = m2  (m1 = 0 on both sides)
    double m0 = 0.0, m2 = 0.0;
    for (const auto& [u, w] : gauss_legendre(quadrature_nodes)) {
        m0 += w * dipole_pattern(u);
        m2 += w * dipole_pattern(u) * u * u;
    }
    DipoleDiscretization d;
    d.a = m2 / 2.0;
    d.b = m0 - m2;
    return d;
}

std::vector<RecoilChannel> dipole_channels(DipolePattern mode, int quadrature_nodes) {
    std::vector<RecoilChannel> out;
    if (mode == DipolePattern::continuous) {
        for (const auto& [u, w] : gauss_legendre(quadrature_nodes))
            out.push_back({w * dipole_pattern(u), u});
    } else {
        const DipoleDiscretization d = DipoleDiscretization::moment_matched(quadrature_nodes);
        out.push_back({d.a, -1.0});
        out.push_back({d.b, 0.0});
        out.push_back({d.a, 1.0});
    }
    return out;
}

double recoil_moment(const std::vector<RecoilChannel>& channels, int k) {
    double m = 0.0;
    for (const auto& c : channels) m += c.weight * std::pow(c.u, double(k));
    return m;
}

}  // namespace cavsim
