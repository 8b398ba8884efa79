// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dcache/cache.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/coverage.hpp"

namespace d2dcache {

/// Integer power; exact for negative bases, unlike std::pow.
inline double ipow(double x, int k) noexcept {
    double result = 1.0;
    double base = x;
    for (int e = k; e > 0; e >>= 1) {
        if (e & 1)
            result *= base;
        base *= base;
    }
    return result;
}

/// Everything the energy objective needs: delivery costs in J/Mbit derived
/// from the average rates, the cluster size, and the content description.
struct EnergyParams {
    double cost_d2d_j_per_mbit = 0.0; // P_d / avg D2D rate
    double cost_bs_j_per_mbit = 0.0;  // P_b / avg BS rate
    int devices_per_cluster = 10;     // n
    std::vector<double> q;            // request probabilities
    std::vector<double> sizes_mbits;  // per-file sizes

    void validate() const {
        if (!(cost_d2d_j_per_mbit > 0.0) || !(cost_bs_j_per_mbit > 0.0))
            throw std::invalid_argument("EnergyParams: costs must be > 0");
        if (devices_per_cluster < 1)
            throw std::invalid_argument("EnergyParams: devices_per_cluster must be >= 1");
        if (q.empty() || q.size() != sizes_mbits.size())
            throw std::invalid_argument("EnergyParams: q and sizes must be equal non-zero length");
        for (double v : q)
            if (!(v >= 0.0))
                throw std::invalid_argument("EnergyParams: q entries must be >= 0");
        for (double s : sizes_mbits)
            if (!(s > 0.0))
                throw std::invalid_argument("EnergyParams: sizes must be > 0");
    }
};

/// Derive costs from the physical layer (Eq.-7-style rates) and content.
inline EnergyParams make_energy_params(const NetworkConfig& network,
                                       const ContentConfig& content) {
    network.validate();
    content.validate();
    const double theta = network.theta_linear();
    const CoverageResult d2d = d2d_coverage(network.d2d_link());
    const CoverageResult bs = bs_coverage(theta, network.alpha);
    const double rate_d2d_mbit_s = avg_rate_bps(network.w_d_hz(), theta, d2d.probability) / 1e6;
    const double rate_bs_mbit_s = avg_rate_bps(network.w_b_hz(), theta, bs.probability) / 1e6;
    EnergyParams params;
    params.cost_d2d_j_per_mbit = network.p_d_w() / rate_d2d_mbit_s;
    params.cost_bs_j_per_mbit = network.p_b_w() / rate_bs_mbit_s;
    params.devices_per_cluster = network.n;
    params.q = zipf_popularity(content.n_files, content.zipf_beta).q;
    params.sizes_mbits = content.file_sizes_mbits;
    return params;
}

/// Per-file energy split. Self-cached requests cost nothing.
struct FileEnergy {
    double self_j = 0.0;
    double d2d_j = 0.0;
    double bs_j = 0.0;
};

struct EnergyReport {
    double total_j = 0.0;
    double per_device_normalized = 0.0; // total / all-BS-delivery bound
    std::vector<FileEnergy> per_file;
};

/// Energy of delivering everything from the BS, the normalization bound.
inline double all_bs_energy(const EnergyParams& params) {
    double acc = 0.0;
    for (std::size_t i = 0; i < params.q.size(); ++i)
        acc += params.q[i] * params.sizes_mbits[i];
    return params.devices_per_cluster * params.cost_bs_j_per_mbit * acc;
}

namespace detail {

/// Objective evaluation without feasibility checks, usable on perturbed
/// points (finite differences) where sum(b) != M.
inline double objective_value(std::span<const double> b, const EnergyParams& params) {
    const int n = params.devices_per_cluster;
    double acc = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double miss = 1.0 - b[i];
        const double all_miss = ipow(miss, n);
        acc += params.q[i] * params.sizes_mbits[i] *
               (params.cost_d2d_j_per_mbit * (miss - all_miss) +
                params.cost_bs_j_per_mbit * all_miss);
    }
    return n * acc;
}

inline double objective_derivative(double b_i, double weight, const EnergyParams& params) {
    const int n = params.devices_per_cluster;
    const double miss_pow = ipow(1.0 - b_i, n - 1);
    return weight * (n * miss_pow * (params.cost_d2d_j_per_mbit - params.cost_bs_j_per_mbit) -
                     params.cost_d2d_j_per_mbit);
}

inline double hessian_diag(double b_i, double weight, const EnergyParams& params) {
    const int n = params.devices_per_cluster;
    if (n < 2)
        return 0.0;
    return weight * n * (n - 1) * ipow(1.0 - b_i, n - 2) *
           (params.cost_bs_j_per_mbit - params.cost_d2d_j_per_mbit);
}

/// w_i = n q_i S_i, the file weight multiplying every derivative.
inline std::vector<double> file_weights(const EnergyParams& params) {
    std::vector<double> w(params.q.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = params.devices_per_cluster * params.q[i] * params.sizes_mbits[i];
    return w;
}

} // namespace detail

/// Gradient of the cluster energy w.r.t. the caching probabilities.
inline std::vector<double> energy_gradient(std::span<const double> b,
                                           const EnergyParams& params) {
    params.validate();
    if (b.size() != params.q.size())
        throw std::invalid_argument("energy_gradient: dimension mismatch");
    std::vector<double> grad(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        grad[i] = detail::objective_derivative(
            b[i], params.devices_per_cluster * params.q[i] * params.sizes_mbits[i], params);
    return grad;
}

/// Total cluster energy of a policy, with the per-file self/D2D/BS breakdown.
inline EnergyReport cluster_energy(const CachingPolicy& policy, const EnergyParams& params) {
    params.validate();
    policy.validate();
    if (policy.b.size() != params.q.size())
        throw std::invalid_argument("cluster_energy: policy/content dimension mismatch");
    const int n = params.devices_per_cluster;
    EnergyReport report;
    report.per_file.resize(policy.b.size());
    double total = 0.0;
    double compensation = 0.0;
    for (std::size_t i = 0; i < policy.b.size(); ++i) {
        const double miss = 1.0 - policy.b[i];
        const double all_miss = ipow(miss, n);
        const double qs = n * params.q[i] * params.sizes_mbits[i];
        FileEnergy& f = report.per_file[i];
        f.self_j = 0.0;
        f.d2d_j = qs * params.cost_d2d_j_per_mbit * (miss - all_miss);
        f.bs_j = qs * params.cost_bs_j_per_mbit * all_miss;
        const double y = (f.d2d_j + f.bs_j) - compensation;
        const double t = total + y;
        compensation = (t - total) - y;
        total = t;
    }
    report.total_j = total;
    const double bound = all_bs_energy(params);
    report.per_device_normalized = bound > 0.0 ? total / bound : 0.0;
    return report;
}

/// Energy relative to the all-BS-delivery bound (the figure normalization).
inline double normalized_energy(const EnergyReport& report, const EnergyParams& params) {
    const double bound = all_bs_energy(params);
    return bound > 0.0 ? report.total_j / bound : 0.0;
}

/// Optimal caching distribution plus the dual state that certifies it.
struct OptimizerResult {
    CachingPolicy policy;
    double multiplier = 0.0;   // v*, price of a unit of cache mass
    double kkt_residual = 0.0; // max stationarity/slackness violation
    int iterations = 0;
    std::string note; // set when a degenerate path was taken
};

/// Max violation of the KKT conditions of (min E s.t. sum b = M, 0<=b<=1) at
/// (policy, multiplier): interior files need dE/db_i = -v, files at 0 need
/// dE/db_i + v >= 0, files at 1 need dE/db_i + v <= 0.
inline double kkt_residual(const CachingPolicy& policy, double multiplier,
                           const EnergyParams& params) {
    params.validate();
    if (policy.b.size() != params.q.size())
        throw std::invalid_argument("kkt_residual: dimension mismatch");
    constexpr double kBoundaryTol = 1e-12;
    double residual = 0.0;
    for (std::size_t i = 0; i < policy.b.size(); ++i) {
        const double weight = params.devices_per_cluster * params.q[i] * params.sizes_mbits[i];
        const double slack = detail::objective_derivative(policy.b[i], weight, params) + multiplier;
        double violation;
        if (policy.b[i] <= kBoundaryTol)
            violation = std::max(0.0, -slack);
        else if (policy.b[i] >= 1.0 - kBoundaryTol)
            violation = std::max(0.0, slack);
        else
            violation = std::abs(slack);
        residual = std::max(residual, violation);
    }
    return residual;
}

namespace detail {

/// b_i(v): invert the stationarity condition file by file, clamped to [0,1].
inline double policy_coordinate(double multiplier, double weight, const EnergyParams& params) {
    if (weight <= 0.0)
        return 0.0;
    const int n = params.devices_per_cluster;
    const double cost_gap = params.cost_bs_j_per_mbit - params.cost_d2d_j_per_mbit;
    const double rhs = (multiplier / weight - params.cost_d2d_j_per_mbit) / (n * cost_gap);
    if (rhs <= 0.0)
        return 1.0;
    if (rhs >= 1.0)
        return 0.0;
    return 1.0 - std::pow(rhs, 1.0 / (n - 1));
}

/// Euclidean projection onto {0 <= b <= 1, sum b = M} by bisection on the
/// shift.
inline std::vector<double> project_capped_simplex(std::vector<double> x, double mass) {
    auto clipped_sum = [&x](double shift) {
        double sum = 0.0;
        for (double v : x)
            sum += std::clamp(v - shift, 0.0, 1.0);
        return sum;
    };
    double lo = *std::min_element(x.begin(), x.end()) - 1.0;
    double hi = *std::max_element(x.begin(), x.end());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (clipped_sum(mid) > mass)
            lo = mid;
        else
            hi = mid;
    }
    const double shift = 0.5 * (lo + hi);
    for (double& v : x)
        v = std::clamp(v - shift, 0.0, 1.0);
    return x;
}

/// Fallback for the non-convex regime (D2D delivery at least as expensive as
/// BS delivery): projected gradient descent to a feasible stationary point.
inline OptimizerResult solve_projected_gradient(const EnergyParams& params, int cache_size,
                                                std::string note) {
    const std::size_t n_files = params.q.size();
    const auto weights = file_weights(params);
    const int n = params.devices_per_cluster;
    double lipschitz = 0.0;
    for (double w : weights)
        lipschitz = std::max(lipschitz, w * n * std::max(1, n - 1) *
                                            std::abs(params.cost_bs_j_per_mbit -
                                                     params.cost_d2d_j_per_mbit));
    const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

    std::vector<double> b(n_files, static_cast<double>(cache_size) / n_files);
    int iterations = 0;
    for (; iterations < 20000; ++iterations) {
        std::vector<double> candidate(n_files);
        for (std::size_t i = 0; i < n_files; ++i)
            candidate[i] = b[i] - step * objective_derivative(b[i], weights[i], params);
        candidate = project_capped_simplex(std::move(candidate), cache_size);
        double delta = 0.0;
        for (std::size_t i = 0; i < n_files; ++i)
            delta = std::max(delta, std::abs(candidate[i] - b[i]));
        b = std::move(candidate);
        if (delta < 1e-13)
            break;
    }

    OptimizerResult result;
    result.policy.b = std::move(b);
    // dual estimate: average negative derivative over interior coordinates
    double acc = 0.0;
    int interior = 0;
    for (std::size_t i = 0; i < n_files; ++i) {
        if (result.policy.b[i] > 1e-9 && result.policy.b[i] < 1.0 - 1e-9) {
            acc -= objective_derivative(result.policy.b[i], weights[i], params);
            ++interior;
        }
    }
    result.multiplier = interior > 0 ? acc / interior : 0.0;
    result.iterations = iterations;
    result.kkt_residual = kkt_residual(result.policy, result.multiplier, params);
    result.note = std::move(note);
    return result;
}

} // namespace detail

/// Minimize the cluster energy over caching distributions with sum(b) = M,
/// 0 <= b <= 1. The stationarity condition is inverted per file and the
/// multiplier found by bisection, so the returned policy satisfies the KKT
/// system to roughly machine precision.
inline OptimizerResult solve_optimal(const EnergyParams& params, int cache_size) {
    params.validate();
    const int n_files = static_cast<int>(params.q.size());
    if (cache_size < 1 || cache_size > n_files)
        throw std::invalid_argument("solve_optimal: cache size must satisfy 1 <= M <= N_f");

    const auto weights = detail::file_weights(params);

    if (cache_size == n_files) {
        // constraint forces full saturation
        OptimizerResult result;
        result.policy.b.assign(params.q.size(), 1.0);
        double min_gain = std::numeric_limits<double>::infinity();
        for (double w : weights)
            if (w > 0.0)
                min_gain = std::min(min_gain, w * params.cost_d2d_j_per_mbit);
        result.multiplier = std::isfinite(min_gain) ? min_gain : 0.0;
        result.kkt_residual = kkt_residual(result.policy, result.multiplier, params);
        result.note = "cache covers the whole library";
        return result;
    }

    if (params.devices_per_cluster == 1) {
        // no D2D partner exists; energy is linear and the optimum is the
        // popular-files policy (greedy on q_i S_i)
        std::vector<int> order(params.q.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&weights](int a, int b) {
            return weights[static_cast<std::size_t>(a)] > weights[static_cast<std::size_t>(b)];
        });
        OptimizerResult result;
        result.policy.b.assign(params.q.size(), 0.0);
        for (int k = 0; k < cache_size; ++k)
            result.policy.b[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1.0;
        const double lowest_kept =
            weights[static_cast<std::size_t>(order[static_cast<std::size_t>(cache_size - 1)])] *
            params.cost_bs_j_per_mbit;
        const double highest_dropped =
            weights[static_cast<std::size_t>(order[static_cast<std::size_t>(cache_size)])] *
            params.cost_bs_j_per_mbit;
        result.multiplier = 0.5 * (lowest_kept + highest_dropped);
        result.kkt_residual = kkt_residual(result.policy, result.multiplier, params);
        result.note = "n=1: no D2D partners, returning the popular-files policy";
        return result;
    }

    if (params.cost_d2d_j_per_mbit >= params.cost_bs_j_per_mbit)
        return detail::solve_projected_gradient(
            params, cache_size,
            "warning: D2D delivery is not cheaper than BS delivery; closed form does not "
            "apply, used projected-gradient fallback");

    // bracket the multiplier so the cache constraint changes sign
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    const int n = params.devices_per_cluster;
    const double gain_at_zero_factor =
        params.cost_d2d_j_per_mbit +
        n * (params.cost_bs_j_per_mbit - params.cost_d2d_j_per_mbit);
    for (double w : weights) {
        if (w <= 0.0)
            continue;
        lo = std::min(lo, w * params.cost_d2d_j_per_mbit);
        hi = std::max(hi, w * gain_at_zero_factor);
    }
    if (!std::isfinite(lo))
        throw std::invalid_argument("solve_optimal: all file weights are zero");

    auto mass_at = [&](double multiplier) {
        double sum = 0.0;
        for (double w : weights)
            sum += detail::policy_coordinate(multiplier, w, params);
        return sum;
    };

    const double target = static_cast<double>(cache_size);
    double best_multiplier = lo;
    double best_gap = std::numeric_limits<double>::infinity();
    int iterations = 0;
    for (; iterations < 200; ++iterations) {
        const double mid = 0.5 * (lo + hi);
        const double mass = mass_at(mid);
        const double gap = std::abs(mass - target);
        if (gap < best_gap) {
            best_gap = gap;
            best_multiplier = mid;
        }
        if (gap <= 1e-10)
            break;
        if (mass > target)
            lo = mid; // cache too full, raise the price
        else
            hi = mid;
    }

    OptimizerResult result;
    result.multiplier = best_multiplier;
    result.policy.b.resize(params.q.size());
    for (std::size_t i = 0; i < params.q.size(); ++i)
        result.policy.b[i] = detail::policy_coordinate(best_multiplier, weights[i], params);
    result.iterations = iterations;
    result.kkt_residual = kkt_residual(result.policy, result.multiplier, params);
    return result;
}

/// Convexity certificate: the Hessian is diagonal; all probe points must have
/// nonnegative entries, and the analytic gradient must match central finite
/// differences (step 1e-6, relative tolerance 1e-5) at every probe.
inline bool verify_convexity(const EnergyParams& params,
                             std::span<const CachingPolicy> probe_policies) {
    params.validate();
    constexpr double kStep = 1e-6;
    for (const CachingPolicy& probe : probe_policies) {
        if (probe.b.size() != params.q.size())
            throw std::invalid_argument("verify_convexity: probe dimension mismatch");
        for (std::size_t i = 0; i < probe.b.size(); ++i) {
            const double weight =
                params.devices_per_cluster * params.q[i] * params.sizes_mbits[i];
            if (detail::hessian_diag(probe.b[i], weight, params) < -1e-12)
                return false;

            std::vector<double> shifted(probe.b.begin(), probe.b.end());
            shifted[i] = probe.b[i] + kStep;
            const double up = detail::objective_value(shifted, params);
            shifted[i] = probe.b[i] - kStep;
            const double down = detail::objective_value(shifted, params);
            const double fd = (up - down) / (2.0 * kStep);
            const double analytic = detail::objective_derivative(probe.b[i], weight, params);
            const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-12});
            if (std::abs(fd - analytic) / scale > 1e-5)
                return false;
        }
    }
    return true;
}

} // namespace d2dcache
