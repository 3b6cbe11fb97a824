#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pacflab {

/// Solve the small dense normal-equations system A x = b in place by
/// Gaussian elimination with partial pivoting. A is row-major n x n.
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[piv * n + col])) piv = r;
        if (A[piv * n + col] == 0.0) throw std::runtime_error("solve_dense: singular system");
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(A[col * n + k], A[piv * n + k]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = A[r * n + col] / A[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) A[r * n + k] -= f * A[col * n + k];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[i * n + k] * x[k];
        x[i] = s / A[i * n + i];
    }
    return x;
}

/// Weighted linear least squares: minimize sum_i w_i (y_i - sum_j c_j B_ji)^2
/// where basis[j][i] is the j-th basis function at sample i.
inline std::vector<double> weighted_lsq(const std::vector<std::vector<double>>& basis,
                                        std::span<const double> y,
                                        std::span<const double> w) {
    const std::size_t p = basis.size();
    const std::size_t n = y.size();
    std::vector<double> A(p * p, 0.0), b(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = j; k < p; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += w[i] * basis[j][i] * basis[k][i];
            A[j * p + k] = A[k * p + j] = s;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w[i] * basis[j][i] * y[i];
        b[j] = s;
    }
    return solve_dense(std::move(A), std::move(b));
}

/// Two-term power-law amplitude fit y(x) ~ A0 x^e + A1 x^{e-1} with the
/// exponent e known in advance. Returns {A0, A1}.
inline std::vector<double> fit_power_amplitudes(std::span<const double> x,
                                                std::span<const double> y,
                                                double e) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> basis(2, std::vector<double>(n));
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        basis[0][i] = std::pow(x[i], e);
        basis[1][i] = std::pow(x[i], e - 1.0);
        // equalize relative weight along the window
        double s = basis[0][i];
        w[i] = 1.0 / (s * s);
    }
    return weighted_lsq(basis, y, w);
}

/// Ordinary least-squares line y = a + b t; returns {a, b, r_squared}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

inline LineFit fit_line(std::span<const double> t, std::span<const double> y) {
    const std::size_t n = t.size();
    if (n < 2) throw std::invalid_argument("fit_line: need at least 2 points");
    double st = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) { st += t[i]; sy += y[i]; }
    const double mt = st / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = t[i] - mt, dy = y[i] - my;
        sxx += dt * dt;
        sxy += dt * dy;
        syy += dy * dy;
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mt;
    f.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

}  // namespace pacflab
