// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "d2dcache/special.hpp"

namespace d2dcache {

enum class CoverageMethod { closed_form, monte_carlo };

/// Coverage probability with provenance. ci_halfwidth and realizations are
/// meaningful only for Monte Carlo results.
struct CoverageResult {
    double probability = 0.0;
    CoverageMethod method = CoverageMethod::closed_form;
    double ci_halfwidth = 0.0;
    std::int64_t realizations = 0;
};

/// Physical-layer parameters of one link type, all in linear/SI units.
struct LinkParams {
    double theta = 1.0;            // SIR threshold, linear
    double alpha = 4.0;            // path-loss exponent
    double sigma_m = 10.0;         // member displacement std deviation
    double lambda_p_per_m2 = 5e-5; // parent density
    double tx_power_w = 0.2;
    double bandwidth_hz = 20e6;

    void validate() const {
        if (theta <= 0.0)
            throw std::invalid_argument("LinkParams: theta must be > 0");
        if (alpha <= 2.0)
            throw std::invalid_argument("LinkParams: alpha must be > 2");
        if (sigma_m <= 0.0)
            throw std::invalid_argument("LinkParams: sigma must be > 0");
        if (lambda_p_per_m2 <= 0.0)
            throw std::invalid_argument("LinkParams: lambda_p must be > 0");
        if (tx_power_w <= 0.0)
            throw std::invalid_argument("LinkParams: tx power must be > 0");
        if (bandwidth_hz <= 0.0)
            throw std::invalid_argument("LinkParams: bandwidth must be > 0");
    }
};

/// Gamma(1 + 2/alpha) * Gamma(1 - 2/alpha); finite for alpha > 2.
inline double interference_gamma_product(double alpha) {
    if (alpha <= 2.0)
        throw std::invalid_argument("interference_gamma_product: alpha must be > 2");
    return gamma_fn(1.0 + 2.0 / alpha) * gamma_fn(1.0 - 2.0 / alpha);
}

/// Laplace transform of the inter-cluster interference at s:
/// exp(-pi lambda_p (s P)^{2/alpha} Gamma(1+2/alpha) Gamma(1-2/alpha)).
/// s and the transmit power enter only through their product, but are taken
/// separately so the coverage quadrature s = theta r^alpha / P stays literal.
inline double laplace_inter_cluster(double s, double lambda_p_per_m2, double tx_power_w,
                                    double alpha) {
    if (s < 0.0)
        throw std::invalid_argument("laplace_inter_cluster: s must be >= 0");
    if (lambda_p_per_m2 <= 0.0)
        throw std::invalid_argument("laplace_inter_cluster: lambda_p must be > 0");
    if (tx_power_w <= 0.0)
        throw std::invalid_argument("laplace_inter_cluster: tx power must be > 0");
    const double exponent = std::numbers::pi * lambda_p_per_m2 *
                            std::pow(s * tx_power_w, 2.0 / alpha) *
                            interference_gamma_product(alpha);
    return std::exp(-exponent);
}

/// Closed-form D2D coverage probability:
/// p = 1 / (4 sigma^2 Z), Z = pi lambda_p theta^{2/alpha} G + 1/(4 sigma^2).
inline CoverageResult d2d_coverage(const LinkParams& params) {
    params.validate();
    const double four_sigma2 = 4.0 * params.sigma_m * params.sigma_m;
    const double z = std::numbers::pi * params.lambda_p_per_m2 *
                         std::pow(params.theta, 2.0 / params.alpha) *
                         interference_gamma_product(params.alpha) +
                     1.0 / four_sigma2;
    return {1.0 / (four_sigma2 * z), CoverageMethod::closed_form, 0.0, 0};
}

/// Closed-form coverage of the nearest-BS cellular link:
/// p = 1 / 2F1(1, -delta; 1 - delta; -theta), delta = 2/alpha.
/// Independent of the BS density.
inline CoverageResult bs_coverage(double theta, double alpha) {
    if (theta <= 0.0)
        throw std::invalid_argument("bs_coverage: theta must be > 0");
    if (alpha <= 2.0)
        throw std::invalid_argument("bs_coverage: alpha must be > 2");
    const double delta = 2.0 / alpha;
    return {1.0 / gauss_2f1(1.0, -delta, 1.0 - delta, -theta), CoverageMethod::closed_form, 0.0,
            0};
}

/// Throughput of a fixed-rate link: W log2(1 + theta) p_c, in bit/s.
inline double avg_rate_bps(double bandwidth_hz, double theta, double coverage_probability) {
    if (bandwidth_hz < 0.0 || theta < 0.0)
        throw std::invalid_argument("avg_rate_bps: negative bandwidth or threshold");
    if (coverage_probability < 0.0 || coverage_probability > 1.0)
        throw std::invalid_argument("avg_rate_bps: coverage probability outside [0,1]");
    return bandwidth_hz * std::log2(1.0 + theta) * coverage_probability;
}

} // namespace d2dcache
