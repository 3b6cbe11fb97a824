#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pacflab/coeffs.hpp"
#include "pacflab/common.hpp"
#include "pacflab/fft.hpp"
#include "pacflab/fitting.hpp"
#include "pacflab/special.hpp"

// Spectral-density route: synthesize Delta(theta) = (2pi)^{-1} sum_k gamma_k
// e^{-ik theta} on a uniform grid, then factor it through the log-spectrum
// (cepstrum) to recover MA/AR expansions for models given only by their
// autocovariance. The grid is offset by half a bin so densities that vanish
// or blow up at theta = 0 (fractional models) are never sampled at the
// singular point; the offset also turns the cepstral aliasing alternating,
// which is what makes the low-order coefficients come out ~1e-7 accurate.

namespace pacflab {

/// Sampled spectral density on theta_j = -pi + 2pi (j + 1/2)/N.
struct SpectralGrid {
    std::size_t size = 0;            // N, a power of two
    std::vector<double> values;      // Delta(theta_j) >= floor
    std::size_t floored_count = 0;   // entries clamped to the positivity floor
    bool half_bin_offset = true;

    double theta(std::size_t j) const {
        return -M_PI + 2.0 * M_PI * (static_cast<double>(j) + 0.5) / static_cast<double>(size);
    }
};

/// Factorization output: log-spectrum Fourier coefficients, the MA/AR
/// expansions of the outer function D(z) = sqrt(2pi) exp(sum_{k>=1} l_k z^k
/// + l_0/2), and the max relative error of |D|^2/(2pi) against the input
/// grid. Note c_0 = sqrt(2pi) e^{l_0/2} carries the process scale here
/// (unlike the constant-term-1 convention of the closed-form route);
/// beta products are scale-free either way.
struct CepstrumResult {
    std::vector<double> log_coeffs;  // l_0 .. l_{N/2}
    CoefficientSequence c;           // MA expansion, c_0 > 0
    CoefficientSequence a;           // AR expansion, a_0 = -1/c_0
    double residual = 0.0;
    double d_hat = 0.0;              // memory exponent read off k*l_k
};

namespace detail {

/// One-sided lag sum with smooth-tail closure: returns, for each grid
/// point, T_j ~ sum_{k>=K} g_k z^k with z = e^{-i theta_j}, using the
/// three-term Abel / summation-by-parts form
///   z^K w (g_K + (z w) Dg_K + (z w)^2 D^2 g_K),  w = 1/(1-z).
/// Accurate to ~|zw|^3 D^3 g_K, i.e. machine level for the grid sizes and
/// tail offsets used here.
inline std::complex<double> abel_tail(double gK, double dgK, double d2gK,
                                      std::complex<double> z, double K) {
    const std::complex<double> w = 1.0 / (1.0 - z);
    const std::complex<double> zw = z * w;
    // z^K via polar form to avoid pow overflow on the integer exponent
    const double ang = std::arg(z) * K;
    const std::complex<double> zK(std::cos(ang), std::sin(ang));
    return zK * w * (gK + zw * (dgK + zw * d2gK));
}

}  // namespace detail

/// Autocovariance with the power-law profile gamma_n = (1+|n|)^{-(1-2d)},
/// the density-only model family (no parametric MA form required).
inline CoefficientSequence power_law_autocov(double d, std::size_t n_len) {
    if (!(d < 0.5))
        throw std::domain_error("power_law_autocov: requires d < 1/2 for a summable profile");
    const double s = 1.0 - 2.0 * d;
    auto build = [s](std::size_t len) {
        std::vector<double> g(len);
        for (std::size_t n = 0; n < len; ++n)
            g[n] = std::pow(1.0 + static_cast<double>(n), -s);
        return g;
    };
    CoefficientSequence seq;
    seq.kind = SeqKind::AUTOCOV;
    seq.decay = DecayClass::power(-s);
    seq.values = build(n_len);
    seq.regen = build;
    seq.cont = [s](double x) { return std::pow(1.0 + x, -s); };
    seq.cont_from = 0.0;
    return seq;
}

/// Sample Delta(theta) = (2pi)^{-1} sum_k gamma_k e^{-ik theta} on the
/// half-bin-offset grid of the given size (power of two). The lag sum runs
/// to K ~ 4N by folding lags into the grid (alternating signs under the
/// offset), plus the Abel closure for power-law tails.
inline SpectralGrid density_from_autocov(CoefficientSequence& gamma, std::size_t N) {
    if (N < 8 || (N & (N - 1)) != 0)
        throw std::invalid_argument("density_from_autocov: size must be a power of two >= 8");
    const bool power_tail = gamma.decay.type == DecayClass::power_law;
    std::size_t K;  // closure point: lags < K summed exactly
    if (power_tail) {
        if (gamma.regen) {
            gamma.ensure(4 * N + 4);
            K = 4 * N;
        } else {
            if (gamma.size() < 8)
                throw std::invalid_argument("density_from_autocov: power-law gamma too short");
            K = gamma.size() - 4;
        }
    } else {
        K = std::min(gamma.size(), 4 * N);  // finite / geometric: sum what exists
    }

    // fold_r = sum_m gamma_{r+mN} (-1)^m for r+mN < K; e^{-ik theta_j}
    // = (-1)^k e^{-i pi k/N} e^{-2pi i jk/N} makes the j-dependence a DFT.
    std::vector<double> fold(N, 0.0);
    {
        double sign = 1.0;
        for (std::size_t base = 0; base < K; base += N, sign = -sign) {
            const std::size_t hi = std::min(N, K - base);
            for (std::size_t r = 0; r < hi; ++r) fold[r] += sign * gamma.values[base + r];
        }
    }
    std::vector<std::complex<double>> h(N);
    for (std::size_t r = 0; r < N; ++r) {
        const double ang = -M_PI * static_cast<double>(r) / static_cast<double>(N);
        const double sgn = (r % 2 == 0) ? 1.0 : -1.0;
        h[r] = fold[r] * sgn * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    fft_forward(h);

    SpectralGrid grid;
    grid.size = N;
    grid.values.resize(N);
    const double g0 = gamma.values[0];
    const double gK = power_tail ? gamma.values[K] : 0.0;
    const double dgK = power_tail ? gamma.values[K + 1] - gamma.values[K] : 0.0;
    const double d2gK =
        power_tail ? gamma.values[K + 2] - 2.0 * gamma.values[K + 1] + gamma.values[K] : 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        std::complex<double> S = h[j];
        if (power_tail) {
            const double th = grid.theta(j);
            const std::complex<double> z(std::cos(th), -std::sin(th));  // e^{-i theta}
            S += detail::abel_tail(gK, dgK, d2gK, z, static_cast<double>(K));
        }
        grid.values[j] = (2.0 * S.real() - g0) / (2.0 * M_PI);
    }

    double vmax = 0.0;
    for (double v : grid.values) vmax = std::max(vmax, v);
    if (!(vmax > 0.0)) throw numeric_error("density_from_autocov: density not positive");
    for (double v : grid.values)
        if (v < -1e-10 * vmax)
            throw numeric_error("density_from_autocov: sampled density negative (" +
                                std::to_string(v) + "); input not positive definite");
    for (double& v : grid.values)
        if (v < 1e-300) {
            v = 1e-300;
            ++grid.floored_count;
        }
    return grid;
}

/// Pointwise density value by direct compensated summation to lag K plus
/// the tail closure (Abel form off zero; fitted power amplitudes with the
/// Euler-Maclaurin tail sum at theta = 0). Used for spot checks at angles
/// the offset grid never visits.
inline double density_point(CoefficientSequence& gamma, double theta,
                            std::size_t K = (std::size_t(1) << 22)) {
    const bool power_tail = gamma.decay.type == DecayClass::power_law;
    if (power_tail && gamma.regen)
        gamma.ensure(K + 4);
    else
        K = gamma.size() > 4 ? gamma.size() - 4 : 0;

    CompensatedSum acc;
    for (std::size_t k = 0; k <= K; ++k)
        acc.add(gamma.values[k] * std::cos(static_cast<double>(k) * theta));
    double S = acc.value();
    double tail = 0.0;
    if (power_tail && K > 64) {
        if (theta == 0.0) {
            // sum_{k>K} (A0 k^e + A1 k^{e-1}) via the exact power tail sums
            double amp[2], exps[2], rel = 0.0;
            detail::fit_amplitudes(gamma.values, gamma.decay.exponent, K / 2, K, amp, exps, &rel);
            tail = amp[0] * power_tail_em(-exps[0], K) + amp[1] * power_tail_em(-exps[1], K);
        } else {
            const std::complex<double> z(std::cos(theta), -std::sin(theta));
            const double gK1 = gamma.values[K + 1];
            const double dg = gamma.values[K + 2] - gamma.values[K + 1];
            const double d2g =
                gamma.values[K + 3] - 2.0 * gamma.values[K + 2] + gamma.values[K + 1];
            tail = detail::abel_tail(gK1, dg, d2g, z, static_cast<double>(K + 1)).real();
        }
    }
    return (2.0 * (S + tail) - gamma.values[0]) / (2.0 * M_PI);
}

namespace detail {

/// Power-series exponential: given l_1..l_{m_max}, return the Maclaurin
/// coefficients of exp(sum l_k z^k) by the logarithmic-derivative recursion
/// e_m = (1/m) sum_{j=1}^m j l_j e_{m-j}.
inline std::vector<double> exp_series(const std::vector<double>& l, std::size_t m_max) {
    std::vector<double> e(m_max + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t m = 1; m <= m_max; ++m) {
        CompensatedSum s;
        const std::size_t jhi = std::min(m, l.size() - 1);
        for (std::size_t j = 1; j <= jhi; ++j)
            s.add(static_cast<double>(j) * l[j] * e[m - j]);
        e[m] = s.value() / static_cast<double>(m);
    }
    return e;
}

/// Continue a coefficient sequence beyond the recursion horizon by a fitted
/// smooth form, selected on a holdout slice: either the power profile
/// y = x^e (A0 + A1/x + A2/x^2) with e supplied, or the slowly-varying
/// profile y = sgn / (x sqrt(B0 + B1 log x)) (the d = 0 class, linear in
/// log x after the transform t = 1/(x y)^2).
struct TailContinuation {
    bool use_log_form = false;
    double e = 0.0, A0 = 0.0, A1 = 0.0, A2 = 0.0;
    double B0 = 0.0, B1 = 0.0, sgn = 1.0;
    double holdout_rel = 0.0;

    double eval(double x) const {
        if (use_log_form) {
            const double q = B0 + B1 * std::log(x);
            if (q <= 0.0) return 0.0;
            return sgn / (x * std::sqrt(q));
        }
        return std::pow(x, e) * (A0 + A1 / x + A2 / (x * x));
    }
};

inline TailContinuation fit_tail_continuation(const std::vector<double>& y, double e,
                                              std::size_t lo, std::size_t hi,
                                              std::size_t hold_hi) {
    TailContinuation best;
    best.e = e;
    // power profile: linear LSQ in the three amplitudes
    {
        std::vector<std::vector<double>> basis(3);
        std::vector<double> ys, ws;
        for (std::size_t x = lo; x < hi; ++x) {
            const double xd = static_cast<double>(x);
            const double p = std::pow(xd, e);
            basis[0].push_back(p);
            basis[1].push_back(p / xd);
            basis[2].push_back(p / (xd * xd));
            ys.push_back(y[x]);
            ws.push_back(1.0 / (p * p));
        }
        auto cf = weighted_lsq(basis, ys, ws);
        best.A0 = cf[0];
        best.A1 = cf[1];
        best.A2 = cf[2];
    }
    double pow_err = 0.0;
    for (std::size_t x = hi; x < hold_hi; ++x) {
        const double ref = std::abs(y[x]) + 1e-300;
        pow_err = std::max(pow_err, std::abs(best.eval(static_cast<double>(x)) - y[x]) / ref);
    }
    best.holdout_rel = pow_err;

    // slowly-varying profile, only meaningful on a single-signed window
    bool same_sign = true;
    for (std::size_t x = lo; x < hold_hi; ++x)
        if (y[x] == 0.0 || (y[x] > 0) != (y[lo] > 0)) {
            same_sign = false;
            break;
        }
    if (same_sign) {
        TailContinuation lg;
        lg.use_log_form = true;
        lg.sgn = (y[lo] > 0) ? 1.0 : -1.0;
        std::vector<double> ts, us;
        for (std::size_t x = lo; x < hi; ++x) {
            const double xd = static_cast<double>(x);
            ts.push_back(std::log(xd));
            const double xy = xd * y[x];
            us.push_back(1.0 / (xy * xy));
        }
        auto lf = fit_line(ts, us);
        lg.B0 = lf.intercept;
        lg.B1 = lf.slope;
        double log_err = 0.0;
        for (std::size_t x = hi; x < hold_hi; ++x) {
            const double ref = std::abs(y[x]) + 1e-300;
            log_err =
                std::max(log_err, std::abs(lg.eval(static_cast<double>(x)) - y[x]) / ref);
        }
        lg.holdout_rel = log_err;
        if (log_err < pow_err) return lg;
    }
    return best;
}

}  // namespace detail

/// Cepstral factorization of a sampled density: Fourier-transform log Delta,
/// exponentiate the nonnegative-frequency half as a power series, extend the
/// resulting MA/AR expansions by fitted smooth tails, and report the max
/// relative reconstruction error of the density.
inline CepstrumResult factorize(const SpectralGrid& grid, std::size_t n_max, double tol = 0.05) {
    const std::size_t N = grid.size;
    if (N == 0) throw std::invalid_argument("factorize: empty grid");

    // cepstrum on the offset grid: l_k = (-1)^k e^{-i pi k/N} F[log Delta]_k / N
    std::vector<std::complex<double>> F(N);
    for (std::size_t j = 0; j < N; ++j) F[j] = std::log(grid.values[j]);
    fft_forward(F);
    std::vector<double> lam(N / 2 + 1);
    for (std::size_t k = 0; k <= N / 2; ++k) {
        const double ang = -M_PI * static_cast<double>(k) / static_cast<double>(N);
        const std::complex<double> ph =
            ((k % 2 == 0) ? 1.0 : -1.0) * std::complex<double>(std::cos(ang), std::sin(ang));
        lam[k] = (ph * F[k]).real() / static_cast<double>(N);
    }

    // Memory exponent from the 1/k profile of the log-spectrum coefficients.
    // A pure d/k cepstrum sampled on the offset grid aliases to
    // lam_k = (d/k) * P(k/N) with
    //   P(x) = 1 + x * (-2 log 2 + 2 x^2 sum_{r>=1} (-1)^r / (r (r^2 - x^2)))
    // (signs from the half-bin phase (-1)^r at alias order r), so divide the
    // profile out instead of absorbing its O(k/N) downward bias into the mean.
    double d_hat = 0.0;
    {
        const std::size_t klo = 64, khi = std::min<std::size_t>(1024, N / 2);
        if (khi > klo) {
            double s = 0.0;
            for (std::size_t k = klo; k <= khi; ++k) {
                const double x = static_cast<double>(k) / static_cast<double>(N);
                double t = 0.0;
                for (std::size_t r = 1; r <= 4096; ++r) {
                    const double rd = static_cast<double>(r);
                    t += ((r % 2) ? -1.0 : 1.0) / (rd * (rd * rd - x * x));
                }
                const double profile = 1.0 + x * (2.0 * x * x * t - 2.0 * std::log(2.0));
                s += static_cast<double>(k) * lam[k] / profile;
            }
            d_hat = s / static_cast<double>(khi - klo + 1);
        }
    }

    const std::size_t n_rec =
        std::clamp<std::size_t>(std::max<std::size_t>(4096, n_max + 1), 4096, 32768);
    if (n_rec > N / 2)
        throw std::invalid_argument("factorize: grid too small for requested n_max");
    const std::size_t ext_len = std::max<std::size_t>(std::size_t(1) << 19, n_max + 1);

    const double c0 = std::sqrt(2.0 * M_PI) * std::exp(lam[0] / 2.0);
    auto cs = detail::exp_series(lam, n_rec);
    std::vector<double> lneg(lam.size());
    for (std::size_t k = 0; k < lam.size(); ++k) lneg[k] = -lam[k];
    auto as = detail::exp_series(lneg, n_rec);

    auto extend = [&](std::vector<double>& v, double scale, double e) {
        for (double& x : v) x *= scale;
        auto tc = detail::fit_tail_continuation(v, e, n_rec / 2, (3 * n_rec) / 4, n_rec);
        const std::size_t keep = n_rec;  // recursion values kept verbatim below this
        v.resize(std::max(ext_len, keep));
        for (std::size_t x = keep; x < v.size(); ++x)
            v[x] = tc.eval(static_cast<double>(x));
        return tc;
    };
    auto tc_c = extend(cs, c0, d_hat - 1.0);
    auto tc_a = extend(as, -1.0 / c0, -1.0 - d_hat);

    // Regenerators re-extend from the recursion prefix, so downstream sums
    // can ask for any length they like.
    auto make_regen = [n_rec](const std::vector<double>& vals, detail::TailContinuation tc) {
        std::vector<double> base(vals.begin(), vals.begin() + n_rec);
        return [base, tc](std::size_t len) {
            std::vector<double> v(base);
            if (len <= v.size()) return v;
            v.resize(len);
            for (std::size_t x = base.size(); x < len; ++x)
                v[x] = tc.eval(static_cast<double>(x));
            return v;
        };
    };

    CepstrumResult out;
    out.d_hat = d_hat;
    out.log_coeffs = std::move(lam);
    out.c.kind = SeqKind::MA;
    out.c.decay = DecayClass::power(d_hat - 1.0);
    out.c.regen = make_regen(cs, tc_c);
    out.c.values = std::move(cs);
    out.c.cont = [tc_c](double x) { return tc_c.eval(x); };
    out.c.cont_from = static_cast<double>(n_rec);
    out.a.kind = SeqKind::AR;
    out.a.decay = DecayClass::power(-1.0 - d_hat);
    out.a.regen = make_regen(as, tc_a);
    out.a.values = std::move(as);
    out.a.cont = [tc_a](double x) { return tc_a.eval(x); };
    out.a.cont_from = static_cast<double>(n_rec);

    // reconstruction residual: |sum_k c_k e^{-ik theta_j}|^2 / (2pi) vs grid
    {
        std::vector<std::complex<double>> D(N, 0.0);
        const std::size_t m = std::min(out.c.values.size(), N);
        for (std::size_t k = 0; k < m; ++k) {
            const double ang = -M_PI * static_cast<double>(k) / static_cast<double>(N);
            const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            D[k] = out.c.values[k] * sgn *
                   std::complex<double>(std::cos(ang), std::sin(ang));
        }
        fft_forward(D);
        double vmax = 0.0;
        for (double v : grid.values) vmax = std::max(vmax, v);
        double worst = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double rec = std::norm(D[j]) / (2.0 * M_PI);
            const double ref = std::max(grid.values[j], 1e-8 * vmax);
            worst = std::max(worst, std::abs(rec - grid.values[j]) / ref);
        }
        out.residual = worst;
    }
    if (!(out.residual <= tol))
        throw numeric_error("factorize: reconstruction residual " + std::to_string(out.residual) +
                            " exceeds tolerance " + std::to_string(tol) +
                            "; enlarge the grid or relax the tolerance");
    return out;
}

}  // namespace pacflab
