#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pacflab/coeffs.hpp"
#include "pacflab/common.hpp"

namespace pacflab {

/// Per-lag output of either PACF route. alpha[i] is the lag-(i+1)
/// reflection coefficient; u and v are the series numerator/denominator
/// in the c_0^2 = 1 convention (v equals the one-step prediction variance
/// entering that order); depth_used and trunc_err are diagnostics of the
/// series evaluator (zero for the recursion route, which is exact given gamma).
struct PacfSeries {
    std::vector<double> alpha;
    std::vector<double> u;
    std::vector<double> v;
    std::vector<int> depth_used;
    std::vector<double> trunc_err;

    std::size_t n_max() const { return alpha.size(); }
    double alpha_at(std::size_t n) const { return alpha[n - 1]; }  // 1-based lag
};

/// Order-recursive solver for the Toeplitz normal equations; the reflection
/// coefficients are exactly the PACF. Dot products are compensated, which
/// keeps the classical error growth in check at orders beyond ~1e3.
inline PacfSeries pacf_via_levinson(const CoefficientSequence& gamma, std::size_t n_max) {
    if (gamma.size() < n_max + 1)
        throw std::length_error("pacf_via_levinson: need gamma_0..gamma_n_max");
    const std::vector<double>& g = gamma.values;
    if (!(g[0] > 0.0)) throw numeric_error("pacf_via_levinson: gamma_0 must be positive");

    PacfSeries out;
    out.alpha.resize(n_max);
    out.u.resize(n_max);
    out.v.resize(n_max);
    out.depth_used.assign(n_max, 0);
    out.trunc_err.assign(n_max, 0.0);

    std::vector<double> coef(n_max, 0.0), prev(n_max, 0.0);
    double var = g[0];
    for (std::size_t n = 1; n <= n_max; ++n) {
        CompensatedSum acc;
        acc.add(g[n]);
        for (std::size_t j = 1; j < n; ++j) acc.add(-coef[j - 1] * g[n - j]);
        const double alpha = acc.value() / var;
        out.alpha[n - 1] = alpha;
        out.v[n - 1] = var;            // variance entering this order
        out.u[n - 1] = alpha * var;    // numerator consistent with alpha = u/v
        if (n < n_max) {
            for (std::size_t j = 0; j < n; ++j) prev[j] = coef[j];
            coef[n - 1] = alpha;
            for (std::size_t j = 1; j < n; ++j)
                coef[j - 1] = prev[j - 1] - alpha * prev[n - 1 - j];
        }
        var *= (1.0 - alpha * alpha);
        if (!(var > 0.0))
            throw numeric_error("pacf_via_levinson: nonpositive prediction variance at order " +
                                std::to_string(n) + " (input not positive definite)");
    }
    return out;
}

/// Relative excess of finite-past over infinite-past prediction error:
/// delta(n) = (var_{n+1} - c0_sq)/c0_sq, where var_k is the prediction
/// variance after k recursion steps. The one-index shift matches
/// prediction from n+1 trailing observations.
inline std::vector<double> delta_ratio(const CoefficientSequence& gamma, double c0_sq,
                                       std::size_t n_max) {
    if (!(c0_sq > 0.0)) throw std::invalid_argument("delta_ratio: c0_sq must be positive");
    auto pac = pacf_via_levinson(gamma, n_max + 1);
    std::vector<double> delta(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        // v[n] is the variance entering order n+1, i.e. after n+1 steps ... var_{n+1}
        const double var_np1 = pac.v[n] * (1.0 - pac.alpha[n] * pac.alpha[n]);
        delta[n - 1] = (var_np1 - c0_sq) / c0_sq;
    }
    return delta;
}

}  // namespace pacflab
