#pragma once

// Independent reference values for the test suite. Everything here is
// computed by a different route than the library uses: log-gamma closed
// forms instead of ratio recursions, dense linear solves instead of the
// order recursion, brute-force loops in extended precision instead of
// FFT correlation and operator iteration. Agreement between the two
// routes is the evidence the tests rest on.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

// zeta(1.6), frozen. Two independent methods agree to the last digit:
// Euler-Maclaurin at cut N=50 with 14 Bernoulli terms, and the
// Cohen-Villegas-Zagier alternating-series acceleration (n=40 and 60).
inline constexpr double kZeta16 = 2.2857656656801297;

// ---------------------------------------------------------------------
// Fractional-model closed forms via std::lgamma (all arguments kept
// positive; signs carried explicitly).

/// MA coefficient of the pure fractional model: Gamma(n+d)/(Gamma(n+1)Gamma(d)).
inline double farima_c(double d, std::size_t n) {
    if (n == 0) return 1.0;
    const double nn = static_cast<double>(n);
    // 1/Gamma(d) = d/Gamma(1+d) keeps every lgamma argument positive for |d| < 1/2
    return d * std::exp(std::lgamma(nn + d) - std::lgamma(nn + 1.0) - std::lgamma(1.0 + d));
}

/// AR coefficient of the pure fractional model: d*Gamma(n-d)/(Gamma(n+1)Gamma(1-d)),
/// with a_0 = -1.
inline double farima_a(double d, std::size_t n) {
    if (n == 0) return -1.0;
    const double nn = static_cast<double>(n);
    return d * std::exp(std::lgamma(nn - d) - std::lgamma(nn + 1.0) - std::lgamma(1.0 - d));
}

/// Variance of the pure fractional model: Gamma(1-2d)/Gamma(1-d)^2.
inline double farima_gamma0(double d) {
    return std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
}

/// Autocorrelation rho_n = prod_{k=1..n} (k-1+d)/(k-d) (exact rational product).
inline double farima_rho(double d, std::size_t n) {
    long double r = 1.0L;
    for (std::size_t k = 1; k <= n; ++k)
        r *= (static_cast<long double>(k) - 1.0L + static_cast<long double>(d)) /
             (static_cast<long double>(k) - static_cast<long double>(d));
    return static_cast<double>(r);
}

inline double farima_gamma(double d, std::size_t n) {
    return farima_gamma0(d) * farima_rho(d, n);
}

/// gamma_0..gamma_n_max of the pure fractional model as one incremental
/// long-double product sweep.
inline std::vector<double> farima_gamma_table(double d, std::size_t n_max) {
    std::vector<double> g(n_max + 1);
    long double rho = 1.0L;
    const long double g0 = static_cast<long double>(farima_gamma0(d));
    g[0] = static_cast<double>(g0);
    for (std::size_t k = 1; k <= n_max; ++k) {
        rho *= (static_cast<long double>(k) - 1.0L + static_cast<long double>(d)) /
               (static_cast<long double>(k) - static_cast<long double>(d));
        g[k] = static_cast<double>(g0 * rho);
    }
    return g;
}

/// PACF closed form of the pure fractional model.
inline double farima_alpha(double d, std::size_t n) {
    return d / (static_cast<double>(n) - d);
}

/// Kernel closed form of the pure fractional model, both variants.
inline double beta_closed(double d, double n) {
    return std::sin(M_PI * d) / (M_PI * (n - d));
}

/// Prediction variance entering order n (n >= 1) for the pure fractional
/// model: gamma_0 * prod_{k=1..n-1} (1 - alpha_k^2). Tends to 1.
inline double farima_v_entering(double d, std::size_t n) {
    long double v = static_cast<long double>(farima_gamma0(d));
    for (std::size_t k = 1; k + 1 <= n; ++k) {
        const long double a = static_cast<long double>(farima_alpha(d, k));
        v *= 1.0L - a * a;
    }
    return static_cast<double>(v);
}

// ---------------------------------------------------------------------
// ARMA closed-form autocovariances, unit innovation variance, recursion
// parameterization X_t = r X_{t-1} + e_t + s e_{t-1} (so the polynomial
// pair is Phi = 1 - r z, Theta = 1 + s z).

inline std::vector<double> ar1_gamma(double r, std::size_t n_max) {
    std::vector<double> g(n_max + 1);
    const double g0 = 1.0 / (1.0 - r * r);
    for (std::size_t n = 0; n <= n_max; ++n) g[n] = g0 * std::pow(r, static_cast<double>(n));
    return g;
}

inline std::vector<double> ma1_gamma(double s, std::size_t n_max) {
    std::vector<double> g(n_max + 1, 0.0);
    g[0] = 1.0 + s * s;
    if (n_max >= 1) g[1] = s;
    return g;
}

inline std::vector<double> arma11_gamma(double r, double s, std::size_t n_max) {
    std::vector<double> g(n_max + 1);
    g[0] = (1.0 + s * s + 2.0 * r * s) / (1.0 - r * r);
    if (n_max >= 1) g[1] = (1.0 + r * s) * (r + s) / (1.0 - r * r);
    for (std::size_t n = 2; n <= n_max; ++n) g[n] = r * g[n - 1];
    return g;
}

/// MA(1) PACF closed form: alpha_n = -(-s)^n (1-s^2)/(1-s^{2(n+1)}).
inline double ma1_alpha(double s, std::size_t n) {
    const double num = -std::pow(-s, static_cast<double>(n)) * (1.0 - s * s);
    return num / (1.0 - std::pow(s, 2.0 * (static_cast<double>(n) + 1.0)));
}

// ---------------------------------------------------------------------
// Dense PACF: solve the order-n Toeplitz normal equations by Gaussian
// elimination with partial pivoting; alpha_n is the last coefficient of
// the order-n predictor. O(n^4) over all orders, for small n only.

inline std::vector<double> pacf_dense(const std::vector<double>& gamma, std::size_t n_max) {
    if (gamma.size() < n_max + 1) throw std::invalid_argument("pacf_dense: gamma too short");
    std::vector<double> alpha(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<double> A(n * n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            b[i] = gamma[i + 1];
            for (std::size_t j = 0; j < n; ++j)
                A[i * n + j] = gamma[i > j ? i - j : j - i];
        }
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t rr = col + 1; rr < n; ++rr)
                if (std::abs(A[rr * n + col]) > std::abs(A[piv * n + col])) piv = rr;
            if (piv != col) {
                for (std::size_t j = 0; j < n; ++j) std::swap(A[col * n + j], A[piv * n + j]);
                std::swap(b[col], b[piv]);
            }
            for (std::size_t rr = col + 1; rr < n; ++rr) {
                const double f = A[rr * n + col] / A[col * n + col];
                for (std::size_t j = col; j < n; ++j) A[rr * n + j] -= f * A[col * n + j];
                b[rr] -= f * b[col];
            }
        }
        std::vector<double> x(n);
        for (std::size_t ii = n; ii-- > 0;) {
            double s = b[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= A[ii * n + j] * x[j];
            x[ii] = s / A[ii * n + ii];
        }
        alpha[n - 1] = x[n - 1];
    }
    return alpha;
}

// ---------------------------------------------------------------------
// Brute-force kernel values for the pure fractional model: direct
// summation in extended precision with Richardson extrapolation in the
// cut (three dyadic cuts kill the 1/V and 1/V^2 tail terms).

namespace detail {

/// Partial sums of a term generator at cuts V, 2V, 4V, extrapolated.
template <class Term>
double richardson_sum(Term term, std::size_t V) {
    long double s = 0.0L;
    double cuts[3];
    std::size_t next = V, slot = 0;
    for (std::size_t v = 0; v < 4 * V; ++v) {
        s += term(v);
        if (v + 1 == next) {
            cuts[slot++] = static_cast<double>(s);
            next *= 2;
        }
    }
    const double a1 = 2.0 * cuts[1] - cuts[0];
    const double a2 = 2.0 * cuts[2] - cuts[1];
    return (4.0 * a2 - a1) / 3.0;
}

}  // namespace detail

/// beta(n) = sum_v c_v a_{v+n} for the pure fractional model with d > 0,
/// summed directly to 10^7 terms (cut extrapolation removes the tail).
/// Both factors walk their own ratio recursion (a_w = a_{w-1}(w-1-d)/w
/// holds from w = 1 with a_0 = -1), so no coefficient storage is needed.
inline double beta_brute(double d, std::size_t n) {
    const std::size_t V = 2'500'000;
    const long double dl = static_cast<long double>(d);
    long double c = 1.0L, aw = -1.0L;
    for (std::size_t w = 1; w <= n; ++w)
        aw *= (static_cast<long double>(w) - 1.0L - dl) / static_cast<long double>(w);
    std::size_t cv = 0, wi = n;
    return detail::richardson_sum(
        [&](std::size_t v) {
            while (cv < v) {
                ++cv;
                c *= (static_cast<long double>(cv) - 1.0L + dl) / static_cast<long double>(cv);
                ++wi;
                aw *= (static_cast<long double>(wi) - 1.0L - dl) / static_cast<long double>(wi);
            }
            return c * aw;
        },
        V);
}

/// beta_-(n) = sum_v psi_v phi_{v+n+1} for the pure fractional model with
/// d < 0, psi_v = sum_{k<=v} c_k and phi_w = a_{w-1} - a_w, summed the
/// same way.
inline double beta_minus_brute(double d, std::size_t n) {
    const std::size_t V = 2'500'000;
    const long double dl = static_cast<long double>(d);
    long double c = 1.0L, psi = 1.0L;
    long double alo = -1.0L;  // a_{v+n}
    for (std::size_t w = 1; w <= n; ++w)
        alo *= (static_cast<long double>(w) - 1.0L - dl) / static_cast<long double>(w);
    long double ahi = alo * (static_cast<long double>(n + 1) - 1.0L - dl) /
                      static_cast<long double>(n + 1);  // a_{v+n+1}
    std::size_t cv = 0, wi = n + 1;
    return detail::richardson_sum(
        [&](std::size_t v) {
            while (cv < v) {
                ++cv;
                c *= (static_cast<long double>(cv) - 1.0L + dl) / static_cast<long double>(cv);
                psi += c;
                ++wi;
                alo = ahi;
                ahi *= (static_cast<long double>(wi) - 1.0L - dl) / static_cast<long double>(wi);
            }
            return psi * (alo - ahi);
        },
        V);
}

// ---------------------------------------------------------------------
// Nested-sum reference: d_3(n) as an explicit double loop over the two
// middle indices (the collapsed form, no operator iteration).

inline double d3_brute(const std::vector<double>& beta_table, std::size_t n, std::size_t M) {
    if (beta_table.size() < n + 2 * M) throw std::invalid_argument("d3_brute: table too short");
    long double total = 0.0L;
    for (std::size_t m1 = 0; m1 < M; ++m1) {
        long double inner = 0.0L;
        for (std::size_t m2 = 0; m2 < M; ++m2)
            inner += static_cast<long double>(beta_table[m1 + m2 + n]) *
                     static_cast<long double>(beta_table[m2 + n]);
        total += static_cast<long double>(beta_table[m1 + n]) * inner;
    }
    return static_cast<double>(total);
}

// ---------------------------------------------------------------------
// tau constants by the direct factorial formula (small k only, tgamma
// stays in range): tau_{2k-1} = (2k-2)! / (pi 4^{k-1} ((k-1)!)^2 (2k-1)).

inline double tau_odd_direct(std::size_t k) {
    const double kk = static_cast<double>(k);
    return std::tgamma(2.0 * kk - 1.0) /
           (M_PI * std::pow(4.0, kk - 1.0) * std::pow(std::tgamma(kk), 2.0) * (2.0 * kk - 1.0));
}

}  // namespace oracle
