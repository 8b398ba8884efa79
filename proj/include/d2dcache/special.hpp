// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace d2dcache {

/// Euler Gamma function. Throws std::domain_error at the poles.
inline double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("gamma_fn: pole at non-positive integer x=" + std::to_string(x));
    return std::tgamma(x);
}

/// Exponentially scaled modified Bessel function exp(-x) * I0(x), x >= 0.
///
/// Power series below the crossover, asymptotic expansion above; both keep
/// all terms positive so there is no cancellation.
inline double bessel_i0_scaled(double x) {
    if (x < 0.0)
        throw std::invalid_argument("bessel_i0_scaled: negative argument");
    if (x < 30.0) {
        const double q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * static_cast<double>(k));
            sum += term;
            if (term < sum * 1e-17)
                break;
        }
        return sum * std::exp(-x);
    }
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 40; ++k) {
        const double ratio = (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (ratio >= 1.0)
            break; // asymptotic tail started growing
        term *= ratio;
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

/// Gauss hypergeometric function 2F1(a, b; c; z) for z <= 0.
///
/// The raw series diverges for z < -1, so the argument is mapped to
/// w = z/(z-1) in [0, 1) by a Pfaff transformation. Transforming away the
/// larger of a, b leaves a series whose convergence margin at w -> 1 is
/// |a - b|, which covers the coverage-probability use (a=1, b=-2/alpha).
inline double gauss_2f1(double a, double b, double c, double z) {
    if (c <= 0.0 && c == std::floor(c))
        throw std::domain_error("gauss_2f1: c is a non-positive integer");
    if (z > 0.0)
        throw std::invalid_argument("gauss_2f1: only z <= 0 is supported");
    if (z == 0.0)
        return 1.0;

    const double w = z / (z - 1.0);
    double sa, sb, prefactor;
    if (a >= b) {
        sa = c - a;
        sb = b;
        prefactor = std::pow(1.0 - z, -b);
    } else {
        sa = a;
        sb = c - b;
        prefactor = std::pow(1.0 - z, -a);
    }

    double term = 1.0;
    double sum = 1.0;
    double compensation = 0.0;
    int small_streak = 0;
    constexpr long kMaxTerms = 2'000'000;
    for (long n = 0; n < kMaxTerms; ++n) {
        const double dn = static_cast<double>(n);
        term *= (sa + dn) * (sb + dn) / ((c + dn) * (dn + 1.0)) * w;
        const double y = term - compensation;
        const double t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
        if (std::abs(term) <= std::abs(sum) * 1e-16) {
            if (++small_streak >= 2)
                return prefactor * sum;
        } else {
            small_streak = 0;
        }
        if (term == 0.0)
            return prefactor * sum; // terminating (polynomial) case
    }
    throw std::domain_error("gauss_2f1: series did not converge");
}

} // namespace d2dcache
