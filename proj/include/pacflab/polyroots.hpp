#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pacflab {

/// All complex roots of p(z) = sum_k coeffs[k] z^k (ascending powers) by
/// the Durand-Kerner simultaneous iteration. Degrees here are tiny (model
/// polynomials), where the method converges to ~1e-13 in a few dozen sweeps.
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs) {
    // strip trailing (near-)zero leading coefficients
    std::size_t deg = coeffs.size();
    while (deg > 1 && coeffs[deg - 1] == 0.0) --deg;
    if (deg <= 1) return {};
    const std::size_t m = deg - 1;

    std::vector<std::complex<double>> c(deg);
    for (std::size_t k = 0; k < deg; ++k) c[k] = coeffs[k] / coeffs[deg - 1];

    auto eval = [&](std::complex<double> z) {
        std::complex<double> p = c[deg - 1];
        for (std::size_t k = deg - 1; k-- > 0;) p = p * z + c[k];
        return p;
    };

    // standard spiral of distinct starting points
    std::vector<std::complex<double>> r(m);
    const std::complex<double> seed(0.4, 0.9);
    r[0] = seed;
    for (std::size_t i = 1; i < m; ++i) r[i] = r[i - 1] * seed;

    for (int iter = 0; iter < 500; ++iter) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < m; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            std::complex<double> step = eval(r[i]) / denom;
            r[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < 1e-14) break;
    }
    return r;
}

/// Smallest root modulus of p (ascending coefficients); +inf for constants.
inline double min_root_modulus(const std::vector<double>& coeffs) {
    auto roots = poly_roots(coeffs);
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& z : roots) mn = std::min(mn, std::abs(z));
    return mn;
}

inline double poly_eval(const std::vector<double>& coeffs, double x) {
    double p = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) p = p * x + coeffs[k];
    return p;
}

}  // namespace pacflab
