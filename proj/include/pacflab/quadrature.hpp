#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pacflab {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre polynomial from the Chebyshev initial guess.
/// Accurate to ~1e-15 for q up to several hundred.
struct GaussLegendre {
    std::vector<double> node;
    std::vector<double> weight;

    explicit GaussLegendre(std::size_t q) : node(q), weight(q) {
        if (q == 0) throw std::invalid_argument("GaussLegendre: q must be >= 1");
        const std::size_t m = (q + 1) / 2;
        for (std::size_t i = 0; i < m; ++i) {
            // Chebyshev-angle initial guess for the i-th positive root
            double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(q) + 0.5));
            double pp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                // evaluate P_q(x) and P'_q(x) by the three-term recurrence
                double p0 = 1.0, p1 = x;
                for (std::size_t k = 2; k <= q; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = q * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            node[i] = -x;
            node[q - 1 - i] = x;
            double w = 2.0 / ((1.0 - x * x) * pp * pp);
            weight[i] = w;
            weight[q - 1 - i] = w;
        }
    }
};

/// One quadrature panel mapped to [a, b].
inline void append_panel(const GaussLegendre& gl, double a, double b,
                         std::vector<double>& xs, std::vector<double>& ws) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < gl.node.size(); ++i) {
        xs.push_back(mid + half * gl.node[i]);
        ws.push_back(half * gl.weight[i]);
    }
}

/// Graded panels in z = log(x/x0) covering z in [0, L]: widths start at
/// w0 and grow by the given ratio up to w_cap, so resolution is densest
/// where the integrand still varies on the scale of x0. Nodes are
/// returned in x = x0 * e^z with weights carrying the Jacobian x dz.
///
/// This layout resolves kernels whose iterates develop x^{-1/2} cos(τ log x)
/// tails: such modes have constant wavelength in z, so uniform-in-z panels
/// of bounded width capture them out to the full domain length L.
struct LogPanelGrid {
    std::vector<double> x;
    std::vector<double> w;

    LogPanelGrid(double x0, double length, std::size_t q_per_panel,
                 double w0 = 0.6931471805599453 /* ln 2 */, double growth = 1.35,
                 double w_cap = 2.0) {
        if (length <= 0.0) return;
        GaussLegendre gl(q_per_panel);
        std::vector<double> zs, zw;
        double z = 0.0, width = w0;
        while (z < length) {
            double z2 = z + width;
            if (z2 > length) z2 = length;
            append_panel(gl, z, z2, zs, zw);
            z = z2;
            width = std::min(width * growth, w_cap);
        }
        x.resize(zs.size());
        w.resize(zs.size());
        for (std::size_t i = 0; i < zs.size(); ++i) {
            x[i] = x0 * std::exp(zs[i]);
            w[i] = zw[i] * x[i];  // dz -> dx Jacobian
        }
    }
};

}  // namespace pacflab
