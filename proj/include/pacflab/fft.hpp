#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pacflab {

/// In-place radix-2 decimation-in-time FFT. n must be a power of two.
/// sign = -1: forward transform (e^{-2πi jk/n}); sign = +1: inverse
/// without the 1/n normalization.
inline void fft_radix2(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_radix2: size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

inline void fft_forward(std::vector<std::complex<double>>& a) { fft_radix2(a, -1); }

inline void fft_inverse(std::vector<std::complex<double>>& a) {
    fft_radix2(a, +1);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& z : a) z *= inv;
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Cross-correlation table r[k] = sum_v u[v] * w[v+k] for k = 0..n_out-1,
/// evaluated with one zero-padded FFT pair. u and w may have different
/// lengths; indices outside either array count as zero.
inline std::vector<double> correlate(const std::vector<double>& u,
                                     const std::vector<double>& w,
                                     std::size_t n_out) {
    const std::size_t n = next_pow2(u.size() + w.size());
    std::vector<std::complex<double>> U(n), W(n);
    for (std::size_t i = 0; i < u.size(); ++i) U[i] = u[i];
    for (std::size_t i = 0; i < w.size(); ++i) W[i] = w[i];
    fft_forward(U);
    fft_forward(W);
    // conj(FFT(u)) .* FFT(w) gives the correlation at nonnegative shifts
    for (std::size_t i = 0; i < n; ++i) U[i] = std::conj(U[i]) * W[i];
    fft_inverse(U);
    std::vector<double> r(n_out, 0.0);
    for (std::size_t k = 0; k < n_out && k < n; ++k) r[k] = U[k].real();
    return r;
}

}  // namespace pacflab
