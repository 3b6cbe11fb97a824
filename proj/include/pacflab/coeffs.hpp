#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pacflab/common.hpp"
#include "pacflab/fft.hpp"
#include "pacflab/fitting.hpp"
#include "pacflab/model.hpp"

namespace pacflab {

enum class SeqKind { MA, AR, PSI, PHI, BETA, AUTOCOV };

struct DecayClass {
    enum Type { exponential, power_law, unknown } type = unknown;
    double exponent = 0.0;  // meaningful for power_law: values[n] ~ n^exponent

    static DecayClass exp_decay() { return {exponential, 0.0}; }
    static DecayClass power(double e) { return {power_law, e}; }
    static DecayClass none() { return {unknown, 0.0}; }
};

/// A lazily extendable real coefficient sequence. `regen`, when set,
/// recomputes the full prefix of a requested length; `cont`, when set,
/// is a smooth continuation f(x) ~ values[x] valid for x >= cont_from
/// (used for integral tail estimates of factorized sequences).
struct CoefficientSequence {
    std::vector<double> values;
    SeqKind kind = SeqKind::MA;
    DecayClass decay = DecayClass::none();
    std::function<std::vector<double>(std::size_t)> regen;
    std::function<double(double)> cont;
    double cont_from = 0.0;

    double at(std::size_t n) const { return values[n]; }
    std::size_t size() const { return values.size(); }

    /// Make sure indices 0..n-1 exist, extending through the generator.
    void ensure(std::size_t n) {
        if (values.size() >= n) return;
        if (!regen)
            throw std::length_error("coefficient sequence too short and not extendable");
        values = regen(n);
        if (values.size() < n)
            throw std::length_error("coefficient sequence generator under-delivered");
    }

    /// Running sum of squares (square-summability monitor).
    double partial_sum_squares() const {
        CompensatedSum s;
        for (double v : values) s.add(v * v);
        return s.value();
    }
};

namespace detail {

/// Maclaurin coefficients of (1-z)^{-d} by the stable ratio recursion
/// f_0 = 1, f_k = f_{k-1} (k-1+d)/k (no Gamma calls, no overflow).
inline std::vector<double> binomial_series(double d, std::size_t n_len) {
    std::vector<double> f(n_len);
    if (n_len == 0) return f;
    f[0] = 1.0;
    for (std::size_t k = 1; k < n_len; ++k)
        f[k] = f[k - 1] * (static_cast<double>(k) - 1.0 + d) / static_cast<double>(k);
    return f;
}

/// h = poly * f (poly short, ascending powers), truncated to f's length.
inline std::vector<double> poly_multiply(const std::vector<double>& poly,
                                         const std::vector<double>& f) {
    std::vector<double> h(f.size(), 0.0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
        if (poly[j] == 0.0) continue;
        for (std::size_t k = j; k < f.size(); ++k) h[k] += poly[j] * f[k - j];
    }
    return h;
}

/// Long division by a constant-term-1 polynomial as a linear recurrence:
/// out_k = h_k - sum_{j>=1} poly_j out_{k-j}. Stable because the model
/// polynomials have all zeros outside the closed unit disk.
inline std::vector<double> poly_divide(const std::vector<double>& h,
                                       const std::vector<double>& poly) {
    std::vector<double> out(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        double s = h[k];
        const std::size_t jmax = std::min(poly.size() - 1, k);
        for (std::size_t j = 1; j <= jmax; ++j) s -= poly[j] * out[k - j];
        out[k] = s;
    }
    return out;
}

}  // namespace detail

/// MA(inf) coefficients c_0..c_{n_max}: Maclaurin expansion of
/// Theta(z)/Phi(z) * (1-z)^{-d}. c_0 = 1 in the constant-term-1 convention.
inline CoefficientSequence farima_ma_coeffs(const FarimaSpec& spec, std::size_t n_max) {
    auto build = [spec](std::size_t n_len) {
        auto f = detail::binomial_series(spec.d, n_len);
        auto h = detail::poly_multiply(spec.theta, f);
        return detail::poly_divide(h, spec.phi);
    };
    CoefficientSequence seq;
    seq.kind = SeqKind::MA;
    seq.decay = (spec.d == 0.0) ? DecayClass::exp_decay() : DecayClass::power(spec.d - 1.0);
    seq.values = build(n_max + 1);
    seq.regen = build;
    return seq;
}

/// AR(inf) coefficients a_0..a_{n_max}: expansion of -Phi(z)/Theta(z) * (1-z)^{d};
/// a_0 = -1.
inline CoefficientSequence farima_ar_coeffs(const FarimaSpec& spec, std::size_t n_max) {
    auto build = [spec](std::size_t n_len) {
        auto g = detail::binomial_series(-spec.d, n_len);
        auto h = detail::poly_multiply(spec.phi, g);
        auto out = detail::poly_divide(h, spec.theta);
        for (auto& v : out) v = -v;
        return out;
    };
    CoefficientSequence seq;
    seq.kind = SeqKind::AR;
    seq.decay = (spec.d == 0.0) ? DecayClass::exp_decay() : DecayClass::power(-1.0 - spec.d);
    seq.values = build(n_max + 1);
    seq.regen = build;
    return seq;
}

/// The d < 0 companion sequences. psi_n is the n-th partial sum of the MA
/// coefficients: the full series sums to Theta(1)/Phi(1) * (1-z)^{-d}|_{z=1} = 0
/// for d < 0, so the tail -sum_{k>n} c_k collapses to +sum_{k<=n} c_k.
/// (This identity is verified numerically in the test suite by direct
/// tail summation.) phi_0 = 1 and phi_n = a_{n-1} - a_n.
inline std::pair<CoefficientSequence, CoefficientSequence>
psi_phi_coeffs(const FarimaSpec& spec, std::size_t n_max) {
    if (!(spec.d < 0.0))
        throw std::domain_error("psi_phi_coeffs: requires -1/2 < d < 0");
    const double q = 1.0 + spec.d;

    auto build_psi = [spec](std::size_t n_len) {
        auto c = farima_ma_coeffs(spec, n_len ? n_len - 1 : 0);
        std::vector<double> psi(n_len);
        CompensatedSum run;
        for (std::size_t n = 0; n < n_len; ++n) {
            run.add(c.values[n]);
            psi[n] = run.value();
        }
        return psi;
    };
    auto build_phi = [spec](std::size_t n_len) {
        auto a = farima_ar_coeffs(spec, n_len);  // need index n_len
        std::vector<double> ph(n_len);
        if (n_len > 0) ph[0] = -a.values[0];  // = 1
        for (std::size_t n = 1; n < n_len; ++n) ph[n] = a.values[n - 1] - a.values[n];
        return ph;
    };

    CoefficientSequence psi;
    psi.kind = SeqKind::PSI;
    psi.decay = DecayClass::power(q - 1.0);  // psi_n ~ n^{-(1-q)}
    psi.values = build_psi(n_max + 1);
    psi.regen = build_psi;

    CoefficientSequence ph;
    ph.kind = SeqKind::PHI;
    ph.decay = DecayClass::power(-1.0 - q);  // phi_n ~ n^{-(1+q)}
    ph.values = build_phi(n_max + 1);
    ph.regen = build_phi;
    return {std::move(psi), std::move(ph)};
}

namespace detail {

/// Tail correction machinery shared by the autocovariance and beta-kernel
/// builders: the dropped tail sum_{v>=V} u_v w_{v+n} is estimated by fitting
/// two-term power amplitudes u_v ~ A0 v^p + A1 v^{p-1} (same for w) on the
/// upper part of the computed range and integrating the fitted product from
/// the midpoint cut V - 1/2 (midpoint rule makes the sum-integral gap
/// O(f'' at the cut), negligible here).
struct PowerTailModel {
    double amp_u[2];
    double exp_u[2];
    double amp_w[2];
    double exp_w[2];
    double cut;       // V - 1/2
    double fit_rel;   // worst relative misfit on a holdout slice

    /// integral_{cut}^{inf} t^{pu} (t+n)^{pw} dt expanded binomially in n/t:
    /// sum_{j<=3} binom(pw, j) n^j cut^{pu+pw-j+1} / (j - 1 - pu - pw).
    static double cross_integral(double pu, double pw, double cut, double n, double* j4_term) {
        double binom = 1.0;
        double total = 0.0;
        double npow = 1.0;
        double last = 0.0;
        for (int j = 0; j <= 4; ++j) {
            const double denom = static_cast<double>(j) - 1.0 - pu - pw;
            last = binom * npow * std::pow(cut, pu + pw - j + 1.0) / denom;
            if (j <= 3)
                total += last;
            binom *= (pw - j) / (j + 1.0);
            npow *= n;
        }
        if (j4_term) *j4_term = std::abs(last);  // first omitted binomial term
        return total;
    }

    /// Tail estimate at shift n plus an error bound for it.
    double eval(double n, double* bound) const {
        double total = 0.0, err = 0.0;
        for (int iu = 0; iu < 2; ++iu)
            for (int iw = 0; iw < 2; ++iw) {
                double j4 = 0.0;
                const double v = amp_u[iu] * amp_w[iw] *
                                 cross_integral(exp_u[iu], exp_w[iw], cut, n, &j4);
                total += v;
                err += std::abs(amp_u[iu] * amp_w[iw]) * j4;
            }
        if (bound) *bound = err + std::abs(total) * (2.0 * fit_rel);
        return total;
    }
};

/// Fit the two-term amplitude model to seq on [lo, hi) and report the
/// worst relative misfit on the top eighth of the window.
inline void fit_amplitudes(const std::vector<double>& seq, double exponent,
                           std::size_t lo, std::size_t hi,
                           double amp[2], double exps[2], double* fit_rel) {
    std::vector<double> xs, ys;
    // log-spaced sample positions keep the normal equations tiny
    const std::size_t samples = 256;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / (samples - 1);
        const std::size_t v = lo + static_cast<std::size_t>((hi - 1 - lo) * std::pow(t, 1.3));
        xs.push_back(static_cast<double>(v));
        ys.push_back(seq[v]);
    }
    auto coef = fit_power_amplitudes(xs, ys, exponent);
    amp[0] = coef[0];
    amp[1] = coef[1];
    exps[0] = exponent;
    exps[1] = exponent - 1.0;
    double worst = 0.0;
    for (std::size_t v = hi - (hi - lo) / 8; v < hi; v += 7) {
        const double x = static_cast<double>(v);
        const double fit = amp[0] * std::pow(x, exps[0]) + amp[1] * std::pow(x, exps[1]);
        const double ref = std::abs(seq[v]) + 1e-300;
        worst = std::max(worst, std::abs(fit - seq[v]) / ref);
    }
    *fit_rel = worst;
}

}  // namespace detail

/// Autocovariance gamma_n = sum_v c_v c_{n+v} for n = 0..n_max, evaluated by
/// one FFT correlation over tail_len terms plus (for power-law sequences) the
/// fitted-amplitude integral tail correction.
inline CoefficientSequence autocov_from_ma(CoefficientSequence& c, std::size_t n_max,
                                           std::size_t tail_len) {
    c.ensure(n_max + tail_len + 1);
    const std::size_t V = c.values.size() > n_max ? c.values.size() - n_max : 1;
    std::vector<double> gam;

    if (c.decay.type == DecayClass::exponential) {
        // Direct per-lag summation: every product c_v c_{v+n} is O(gamma_n),
        // so each lag comes out with full relative precision — unlike the
        // FFT route, whose absolute noise floor (~1e-16 * ||c||^2) would
        // swamp the geometrically small high lags.
        std::size_t v_cut = 0;
        for (std::size_t v = 0; v < c.values.size(); ++v)
            if (c.values[v] != 0.0) v_cut = v + 1;
        gam.assign(n_max + 1, 0.0);
        parallel_for(n_max + 1, [&](std::size_t n) {
            CompensatedSum s;
            const std::size_t hi = std::min(v_cut, c.values.size() - n);
            for (std::size_t v = 0; v < hi; ++v) s.add(c.values[v] * c.values[v + n]);
            gam[n] = s.value();
        });
    } else {
        std::vector<double> head(c.values.begin(), c.values.begin() + V);
        std::vector<double> full(c.values.begin(), c.values.begin() + V + n_max);
        gam = correlate(head, full, n_max + 1);
    }

    if (c.decay.type == DecayClass::power_law && V >= 512) {
        detail::PowerTailModel tm{};
        tm.cut = static_cast<double>(V) - 0.5;
        double rel_u = 0.0;
        detail::fit_amplitudes(c.values, c.decay.exponent, V / 4, V, tm.amp_u, tm.exp_u, &rel_u);
        for (int i = 0; i < 2; ++i) { tm.amp_w[i] = tm.amp_u[i]; tm.exp_w[i] = tm.exp_u[i]; }
        tm.fit_rel = rel_u;
        for (std::size_t n = 0; n <= n_max; ++n)
            gam[n] += tm.eval(static_cast<double>(n), nullptr);
    }

    CoefficientSequence out;
    out.kind = SeqKind::AUTOCOV;
    out.decay = (c.decay.type == DecayClass::power_law)
                    ? DecayClass::power(2.0 * c.decay.exponent + 1.0)
                    : c.decay;
    out.values = std::move(gam);
    if (out.values[0] <= 0.0)
        throw numeric_error("autocovariance at lag 0 is not positive");
    return out;
}

/// Convenience: full coefficient set for a model, long enough for all
/// downstream kernels. Default series length 2^20 keeps the correlation
/// tails at the 1e-12 level once the integral corrections are applied.
inline constexpr std::size_t kDefaultSeriesLen = std::size_t(1) << 20;

}  // namespace pacflab
