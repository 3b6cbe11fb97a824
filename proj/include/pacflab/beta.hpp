#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pacflab/coeffs.hpp"
#include "pacflab/common.hpp"
#include "pacflab/fft.hpp"
#include "pacflab/fitting.hpp"

namespace pacflab {

/// Which cross-product kernel a BetaSequence holds: the standard one
/// beta(n) = sum_v c_v a_{v+n}, or the reweighted "minus" variant
/// beta_-(n) = sum_v psi_v phi_{v+n+1} used for -1/2 < d < 0 where the
/// standard product is not absolutely summable.
enum class BetaVariant { standard, minus };

/// The beta kernel on the integer lattice plus a smooth real-argument
/// continuation, so the spectral evaluator can sample it off-lattice.
/// Below interp_hi, eval() interpolates the integer table (degree-7
/// Lagrange); beyond it, a fitted large-x form x*beta ~ C1 + C2/x +
/// C3/x^2 + C4/x^3 takes over.
struct BetaSequence {
    BetaVariant variant = BetaVariant::standard;
    std::vector<double> values;      // beta(0..n_max)
    std::vector<double> tail_bound;  // per-lag bound on the inner-sum truncation error

    std::vector<double> table;       // beta on integers 0..table.size()-1
    double table_tail_bound = 0.0;   // worst tail_bound over the whole table
    double interp_hi = 0.0;          // interpolation/asymptote crossover
    double asym[4] = {0.0, 0.0, 0.0, 0.0};
    double asym_rel = 0.0;           // misfit of the large-x form, relative to its scale
    double asym_abs = 0.0;           // misfit of the large-x form, absolute (x*beta units)

    std::size_t n_max() const { return values.empty() ? 0 : values.size() - 1; }
    double at(std::size_t n) const { return values.at(n); }

    /// Kernel at real argument x >= 0.
    double eval(double x) const {
        if (!(x >= 0.0)) throw std::domain_error("BetaSequence::eval: x must be >= 0");
        const double r = std::round(x);
        if (r < static_cast<double>(table.size()) && std::abs(x - r) < 1e-9)
            return table[static_cast<std::size_t>(r)];
        if (x <= interp_hi) {
            long i0 = static_cast<long>(std::floor(x)) - 3;
            i0 = std::clamp<long>(i0, 0, static_cast<long>(table.size()) - 8);
            double res = 0.0;
            for (int i = 0; i < 8; ++i) {
                double li = 1.0;
                for (int j = 0; j < 8; ++j) {
                    if (j == i) continue;
                    li *= (x - static_cast<double>(i0 + j)) / static_cast<double>(i - j);
                }
                res += li * table[static_cast<std::size_t>(i0) + i];
            }
            return res;
        }
        const double ix = 1.0 / x;
        return ix * (asym[0] + ix * (asym[1] + ix * (asym[2] + ix * asym[3])));
    }
};

namespace detail {

/// Shared builder: tab[n] = sum_{v<V} u_v w_{v+n+shift} by FFT correlation,
/// V chosen adaptively, with the fitted-amplitude integral correction for
/// power-law tails and an honest per-lag bound in every decay class.
inline BetaSequence build_beta(CoefficientSequence& u, CoefficientSequence& w,
                               std::size_t shift, BetaVariant variant,
                               std::size_t n_max, const TruncationPolicy& policy) {
    policy.check();
    const std::size_t table_len = std::max<std::size_t>(n_max + 1, 1032);
    const bool power_pair = u.decay.type == DecayClass::power_law &&
                            w.decay.type == DecayClass::power_law;
    const bool unknown_pair = u.decay.type == DecayClass::unknown ||
                              w.decay.type == DecayClass::unknown;

    std::vector<double> tab, bnd;
    double worst = 0.0;
    std::size_t V = std::min<std::size_t>(policy.inner_len, std::size_t(1) << 17);
    for (;;) {
        u.ensure(V);
        w.ensure(V + table_len - 1 + shift);
        std::vector<double> head(u.values.begin(), u.values.begin() + V);
        std::vector<double> full(w.values.begin(), w.values.begin() + V + table_len - 1 + shift);
        auto raw = correlate(head, full, table_len + shift);
        tab.assign(raw.begin() + shift, raw.end());
        bnd.assign(table_len, 0.0);

        // The FFT correlation carries rounding noise on the scale
        // eps * log2(N) * ||u||_1 * ||w||_inf, which the tail models below
        // never see. Measure it directly: recompute a few spread-out lags by
        // compensated summation and take the worst gap (with headroom for
        // unprobed lags), plus the analytic estimate as a floor.
        double fft_noise = 0.0;
        {
            const std::size_t probes[] = {0,
                                          1,
                                          table_len / 8,
                                          table_len / 3,
                                          table_len / 2,
                                          (2 * table_len) / 3,
                                          (7 * table_len) / 8,
                                          table_len - 1};
            for (std::size_t n : probes) {
                CompensatedSum s;
                for (std::size_t v = 0; v < V; ++v) s.add(head[v] * full[v + n + shift]);
                fft_noise = std::max(fft_noise, std::abs(s.value() - tab[n]));
            }
            double l1u = 0.0, linfw = 0.0;
            for (double x : head) l1u += std::abs(x);
            for (double x : full) linfw = std::max(linfw, std::abs(x));
            fft_noise = 4.0 * fft_noise + 2.3e-15 * l1u * linfw;
        }
        const double noise_floor = fft_noise + 1e-15 * (std::abs(tab[0]) + 1.0);
        if (power_pair && V >= 512) {
            PowerTailModel tm{};
            tm.cut = static_cast<double>(V) - 0.5;
            double rel_u = 0.0, rel_w = 0.0;
            fit_amplitudes(u.values, u.decay.exponent, V / 4, V, tm.amp_u, tm.exp_u, &rel_u);
            fit_amplitudes(w.values, w.decay.exponent, V / 4, V, tm.amp_w, tm.exp_w, &rel_w);
            tm.fit_rel = std::max(rel_u, rel_w);
            for (std::size_t n = 0; n < table_len; ++n) {
                double b = 0.0;
                tab[n] += tm.eval(static_cast<double>(n + shift), &b);
                bnd[n] = b + noise_floor;
            }
        } else {
            // Last-block proxy: for geometric tails the dropped sum is far
            // below the final 64 included terms; for a user sequence of
            // unknown decay this is an estimate, flagged below.
            const std::size_t block = std::min<std::size_t>(64, V);
            for (std::size_t n = 0; n < table_len; ++n) {
                double s = 0.0;
                for (std::size_t v = V - block; v < V; ++v)
                    s += std::abs(u.values[v] * w.values[v + n + shift]);
                bnd[n] = s * (unknown_pair ? 4.0 : 1.0) + noise_floor;
            }
        }

        worst = *std::max_element(bnd.begin(), bnd.end());
        if (worst < policy.abs_tol / 2 || V >= policy.inner_len) break;
        V = std::min(V * 2, policy.inner_len);
    }
    if (worst > policy.abs_tol && unknown_pair)
        throw numeric_error("beta kernel: truncation bound " + std::to_string(worst) +
                            " did not reach abs_tol within inner_len");

    BetaSequence beta;
    beta.variant = variant;
    beta.table = std::move(tab);
    beta.table_tail_bound = worst;
    beta.values.assign(beta.table.begin(), beta.table.begin() + n_max + 1);
    beta.tail_bound.assign(bnd.begin(), bnd.begin() + n_max + 1);
    beta.interp_hi = static_cast<double>(table_len) - 5.0;

    // Large-x form of x*beta(x), fitted on [400, 1000). For kernels with
    // geometric decay the fitted coefficients come out ~0, which is the
    // correct continuation there.
    {
        const std::size_t alo = 400, ahi = std::min<std::size_t>(1000, table_len - 5);
        std::vector<double> zs, ws;
        std::vector<std::vector<double>> basis(4);
        for (std::size_t x = alo; x < ahi; ++x) {
            const double xd = static_cast<double>(x);
            zs.push_back(xd * beta.table[x]);
            ws.push_back(1.0);
            basis[0].push_back(1.0);
            basis[1].push_back(1.0 / xd);
            basis[2].push_back(1.0 / (xd * xd));
            basis[3].push_back(1.0 / (xd * xd * xd));
        }
        auto cf = weighted_lsq(basis, zs, ws);
        for (int i = 0; i < 4; ++i) beta.asym[i] = cf[i];
        double scale = 0.0;
        for (double z : zs) scale = std::max(scale, std::abs(z));
        double worst_fit = 0.0;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const double xd = static_cast<double>(alo + i);
            const double fit = cf[0] + cf[1] / xd + cf[2] / (xd * xd) + cf[3] / (xd * xd * xd);
            worst_fit = std::max(worst_fit, std::abs(fit - zs[i]));
        }
        beta.asym_rel = worst_fit / (scale + 1e-300);
        beta.asym_abs = worst_fit;
    }
    return beta;
}

}  // namespace detail

/// beta(n) = sum_v c_v a_{v+n} for n = 0..n_max. Requires the summable
/// pairing (d >= 0 models); use beta_minus for d < 0.
inline BetaSequence beta_standard(CoefficientSequence& c, CoefficientSequence& a,
                                  std::size_t n_max, const TruncationPolicy& policy = {}) {
    return detail::build_beta(c, a, 0, BetaVariant::standard, n_max, policy);
}

/// beta_-(n) = sum_v psi_v phi_{v+n+1} for n = 0..n_max (the d < 0 kernel).
inline BetaSequence beta_minus(CoefficientSequence& psi, CoefficientSequence& phi,
                               std::size_t n_max, const TruncationPolicy& policy = {}) {
    return detail::build_beta(psi, phi, 1, BetaVariant::minus, n_max, policy);
}

/// Kernel for a parametric model: the standard pairing for d >= 0, the
/// reweighted one for d < 0.
inline BetaSequence beta_for_model(const FarimaSpec& spec, std::size_t n_max,
                                   const TruncationPolicy& policy = {}) {
    if (spec.d < 0.0) {
        auto [psi, phi] = psi_phi_coeffs(spec, 8);
        return beta_minus(psi, phi, n_max, policy);
    }
    auto c = farima_ma_coeffs(spec, 8);
    auto a = farima_ar_coeffs(spec, 8);
    return beta_standard(c, a, n_max, policy);
}

}  // namespace pacflab
