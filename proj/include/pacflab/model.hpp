#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pacflab/common.hpp"
#include "pacflab/polyroots.hpp"

namespace pacflab {

/// Fractional ARIMA(p, d, q) model parameters. Polynomials are stored in
/// ascending powers with the constant term normalized to 1 on construction.
struct FarimaSpec {
    double d = 0.0;
    std::vector<double> phi{1.0};    // AR polynomial, phi[0] == 1
    std::vector<double> theta{1.0};  // MA polynomial, theta[0] == 1

    FarimaSpec() = default;
    FarimaSpec(double d_, std::vector<double> phi_, std::vector<double> theta_)
        : d(d_), phi(std::move(phi_)), theta(std::move(theta_)) {
        normalize();
        validate();
    }

    std::size_t p() const { return phi.size() - 1; }
    std::size_t q() const { return theta.size() - 1; }

    void normalize() {
        if (phi.empty()) phi = {1.0};
        if (theta.empty()) theta = {1.0};
        if (phi[0] == 0.0 || theta[0] == 0.0)
            throw model_error("polynomial constant term must be nonzero");
        if (phi[0] != 1.0) {
            const double lead = phi[0];
            for (auto& v : phi) v /= lead;
        }
        if (theta[0] != 1.0) {
            const double lead = theta[0];
            for (auto& v : theta) v /= lead;
        }
        // drop trailing zeros so degree reflects the actual polynomial
        while (phi.size() > 1 && phi.back() == 0.0) phi.pop_back();
        while (theta.size() > 1 && theta.back() == 0.0) theta.pop_back();
    }

    /// Construction-time checks: |d| < 1/2, both polynomials zero-free on
    /// the closed unit disk (tolerance 1e-8 on |root| - 1), no shared root.
    void validate() const {
        if (!(std::abs(d) < 0.5))
            throw model_error("memory parameter d must satisfy |d| < 1/2");
        auto rphi = poly_roots(phi);
        auto rtheta = poly_roots(theta);
        for (const auto& z : rphi)
            if (std::abs(z) - 1.0 <= 1e-8)
                throw model_error("AR polynomial has a zero in the closed unit disk");
        for (const auto& z : rtheta)
            if (std::abs(z) - 1.0 <= 1e-8)
                throw model_error("MA polynomial has a zero in the closed unit disk");
        for (const auto& zp : rphi)
            for (const auto& zt : rtheta)
                if (std::abs(zp - zt) < 1e-8)
                    throw model_error("AR and MA polynomials share a root");
    }

    bool is_pure_fractional() const { return p() == 0 && q() == 0; }
};

/// Normalizing constant of the coefficient asymptotics, in the
/// constant-term-1 convention of both polynomials.
inline double k1_constant(const FarimaSpec& spec) {
    return poly_eval(spec.theta, 1.0) / poly_eval(spec.phi, 1.0);
}

}  // namespace pacflab
