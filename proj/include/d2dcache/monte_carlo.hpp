// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "d2dcache/config.hpp"
#include "d2dcache/coverage.hpp"
#include "d2dcache/geometry.hpp"
#include "d2dcache/rng.hpp"

namespace d2dcache {

/// Monte Carlo run description. A window radius <= 0 selects the default
/// 20 / sqrt(lambda_p), at which the truncated interference tail is < 0.1%
/// of the mean inter-cluster term.
struct McConfig {
    std::int64_t realizations = 100000;
    std::uint64_t seed = 1;
    double window_radius_m = 0.0;
    NetworkConfig network;

    double effective_window_radius() const {
        return window_radius_m > 0.0 ? window_radius_m
                                     : default_window_radius(network.lambda_p_per_m2());
    }

    void validate() const {
        if (realizations < 1)
            throw std::invalid_argument("McConfig: realizations must be >= 1");
        network.validate();
    }
};

/// One simulated SIR draw at the typical device.
struct SirSample {
    double sir = 0.0;
    double serving_distance_m = 0.0;
    double interference_w = 0.0;
};

/// Side information about a coverage run.
struct McDiagnostics {
    std::int64_t empty_interference_count = 0; // realizations with no parent in window
};

inline double path_gain(double distance_sq, double alpha) noexcept {
    if (alpha == 4.0)
        return 1.0 / (distance_sq * distance_sq);
    return std::pow(distance_sq, -0.5 * alpha);
}

/// Received power over a squared distance: P g d^-alpha.
inline double received_power_w(double tx_power_w, double fading, double distance_sq,
                               double alpha) noexcept {
    return tx_power_w * fading * path_gain(distance_sq, alpha);
}

/// Assemble one SIR sample from explicit components; the same arithmetic the
/// engine uses, exposed so the assembly is unit-testable.
inline SirSample assemble_sir(double tx_power_w, double alpha, double serving_distance_m,
                              double serving_fading,
                              std::span<const std::pair<double, double>> interferers) {
    const double signal =
        received_power_w(tx_power_w, serving_fading, serving_distance_m * serving_distance_m,
                         alpha);
    double interference = 0.0;
    for (const auto& [distance_m, fading] : interferers)
        interference += received_power_w(tx_power_w, fading, distance_m * distance_m, alpha);
    SirSample sample;
    sample.serving_distance_m = serving_distance_m;
    sample.interference_w = interference;
    sample.sir = interference > 0.0 ? signal / interference
                                    : std::numeric_limits<double>::infinity();
    return sample;
}

namespace detail {

/// Deterministic chunked runner: realization r always uses RNG stream r, and
/// partial results live in per-chunk slots combined in chunk order, so any
/// thread count produces bit-identical output.
template <typename Partial, typename Body>
std::vector<Partial> run_chunked(std::int64_t realizations, unsigned threads, Body&& body) {
    constexpr std::int64_t kChunk = 4096;
    const std::int64_t n_chunks = (realizations + kChunk - 1) / kChunk;
    std::vector<Partial> partials(static_cast<std::size_t>(n_chunks));

    unsigned worker_count = threads != 0 ? threads : std::thread::hardware_concurrency();
    if (worker_count == 0)
        worker_count = 1;
    worker_count = static_cast<unsigned>(
        std::min<std::int64_t>(worker_count, n_chunks));

    std::atomic<std::int64_t> next_chunk{0};
    auto work = [&]() {
        for (;;) {
            const std::int64_t chunk = next_chunk.fetch_add(1);
            if (chunk >= n_chunks)
                return;
            const std::int64_t begin = chunk * kChunk;
            const std::int64_t end = std::min(realizations, begin + kChunk);
            body(partials[static_cast<std::size_t>(chunk)], begin, end);
        }
    };

    if (worker_count <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (unsigned i = 0; i < worker_count; ++i)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    return partials;
}

struct KahanSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double value) noexcept {
        const double y = value - compensation;
        const double t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }
};

/// Inter-cluster interference at the origin for one realization: parents are
/// a PPP in the window, each contributing one Gaussian-displaced active
/// transmitter with unit-mean exponential fading.
inline double sample_interference(RngStream& rng, double lambda_p_per_m2, double sigma_m,
                                  double tx_power_w, double alpha, double window_radius_m,
                                  std::uint64_t& parent_count) {
    const double mean_parents =
        lambda_p_per_m2 * std::numbers::pi * window_radius_m * window_radius_m;
    parent_count = rng.poisson(mean_parents);
    double interference = 0.0;
    for (std::uint64_t p = 0; p < parent_count; ++p) {
        auto [px, py] = rng.disc_point(window_radius_m);
        auto [ox, oy] = rng.gaussian_pair(sigma_m);
        const double dx = px + ox;
        const double dy = py + oy;
        interference +=
            received_power_w(tx_power_w, rng.exponential(), dx * dx + dy * dy, alpha);
    }
    return interference;
}

} // namespace detail

/// Simulated D2D coverage at several thresholds over common random numbers.
///
/// Each realization draws the representative-cluster geometry (typical
/// device at the origin, cluster center Gaussian-displaced, serving
/// transmitter another Gaussian daughter), the interfering clusters, and
/// exponential fading, then compares the SIR against every theta. Empty
/// interference windows count as covered (SIR = infinity) and are tallied in
/// the diagnostics.
inline std::vector<CoverageResult> simulate_d2d_coverage_multi(
    const McConfig& cfg, std::span<const double> thetas, unsigned threads = 0,
    McDiagnostics* diagnostics = nullptr, std::vector<SirSample>* samples = nullptr) {
    cfg.validate();
    if (thetas.empty())
        throw std::invalid_argument("simulate_d2d_coverage_multi: no thresholds");
    for (double theta : thetas)
        if (!(theta > 0.0))
            throw std::invalid_argument("simulate_d2d_coverage_multi: thresholds must be > 0");

    const double sigma = cfg.network.sigma_m;
    const double alpha = cfg.network.alpha;
    const double tx_power = cfg.network.p_d_w();
    const double lambda_p = cfg.network.lambda_p_per_m2();
    const double window = cfg.effective_window_radius();

    if (samples)
        samples->assign(static_cast<std::size_t>(cfg.realizations), SirSample{});

    struct Partial {
        std::vector<std::int64_t> covered;
        std::int64_t empty_windows = 0;
    };

    auto partials = detail::run_chunked<Partial>(
        cfg.realizations, threads,
        [&](Partial& partial, std::int64_t begin, std::int64_t end) {
            partial.covered.assign(thetas.size(), 0);
            for (std::int64_t r = begin; r < end; ++r) {
                RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));

                auto [cx, cy] = rng.gaussian_pair(sigma); // cluster center offset
                auto [sx, sy] = rng.gaussian_pair(sigma); // serving TX offset
                const double rx = cx + sx;
                const double ry = cy + sy;
                const double serving_sq = rx * rx + ry * ry;
                const double signal =
                    received_power_w(tx_power, rng.exponential(), serving_sq, alpha);

                std::uint64_t parents = 0;
                const double interference = detail::sample_interference(
                    rng, lambda_p, sigma, tx_power, alpha, window, parents);
                if (parents == 0)
                    ++partial.empty_windows;

                const double sir = interference > 0.0
                                       ? signal / interference
                                       : std::numeric_limits<double>::infinity();
                for (std::size_t t = 0; t < thetas.size(); ++t)
                    partial.covered[t] += sir > thetas[t] ? 1 : 0;
                if (samples)
                    (*samples)[static_cast<std::size_t>(r)] = {sir, std::sqrt(serving_sq),
                                                               interference};
            }
        });

    std::vector<std::int64_t> covered(thetas.size(), 0);
    std::int64_t empty_windows = 0;
    for (const Partial& partial : partials) {
        for (std::size_t t = 0; t < thetas.size(); ++t)
            covered[t] += partial.covered[t];
        empty_windows += partial.empty_windows;
    }
    if (diagnostics)
        diagnostics->empty_interference_count = empty_windows;

    std::vector<CoverageResult> results(thetas.size());
    const double n = static_cast<double>(cfg.realizations);
    for (std::size_t t = 0; t < thetas.size(); ++t) {
        const double p = static_cast<double>(covered[t]) / n;
        results[t] = {p, CoverageMethod::monte_carlo, 1.96 * std::sqrt(p * (1.0 - p) / n),
                      cfg.realizations};
    }
    return results;
}

inline CoverageResult simulate_d2d_coverage(const McConfig& cfg, double theta,
                                            unsigned threads = 0,
                                            McDiagnostics* diagnostics = nullptr) {
    const std::array<double, 1> thetas{theta};
    return simulate_d2d_coverage_multi(cfg, thetas, threads, diagnostics).front();
}

/// Monte Carlo mean of exp(-s I) with a 95% CI.
struct LaplaceEstimate {
    double value = 0.0;
    double ci_halfwidth = 0.0;
    std::int64_t realizations = 0;
};

/// Empirical Laplace transform of the inter-cluster interference at each s.
/// Only the interfering clusters are simulated; the representative cluster
/// is excluded by construction.
inline std::vector<LaplaceEstimate> estimate_laplace_multi(const McConfig& cfg,
                                                           std::span<const double> s_values,
                                                           unsigned threads = 0) {
    cfg.validate();
    if (s_values.empty())
        throw std::invalid_argument("estimate_laplace_multi: no s values");
    for (double s : s_values)
        if (s < 0.0)
            throw std::invalid_argument("estimate_laplace_multi: s must be >= 0");

    const double sigma = cfg.network.sigma_m;
    const double alpha = cfg.network.alpha;
    const double tx_power = cfg.network.p_d_w();
    const double lambda_p = cfg.network.lambda_p_per_m2();
    const double window = cfg.effective_window_radius();

    struct Partial {
        std::vector<detail::KahanSum> sum;
        std::vector<detail::KahanSum> sum_sq;
    };

    auto partials = detail::run_chunked<Partial>(
        cfg.realizations, threads,
        [&](Partial& partial, std::int64_t begin, std::int64_t end) {
            partial.sum.resize(s_values.size());
            partial.sum_sq.resize(s_values.size());
            for (std::int64_t r = begin; r < end; ++r) {
                RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
                std::uint64_t parents = 0;
                const double interference = detail::sample_interference(
                    rng, lambda_p, sigma, tx_power, alpha, window, parents);
                for (std::size_t j = 0; j < s_values.size(); ++j) {
                    const double value = std::exp(-s_values[j] * interference);
                    partial.sum[j].add(value);
                    partial.sum_sq[j].add(value * value);
                }
            }
        });

    std::vector<LaplaceEstimate> estimates(s_values.size());
    const double n = static_cast<double>(cfg.realizations);
    for (std::size_t j = 0; j < s_values.size(); ++j) {
        detail::KahanSum total;
        detail::KahanSum total_sq;
        for (const Partial& partial : partials) {
            if (!partial.sum.empty()) {
                total.add(partial.sum[j].sum);
                total_sq.add(partial.sum_sq[j].sum);
            }
        }
        const double mean = total.sum / n;
        double variance = 0.0;
        if (cfg.realizations > 1)
            variance = std::max(0.0, (total_sq.sum - n * mean * mean) / (n - 1.0));
        estimates[j] = {mean, 1.96 * std::sqrt(variance / n), cfg.realizations};
    }
    return estimates;
}

inline LaplaceEstimate estimate_laplace(const McConfig& cfg, double s, unsigned threads = 0) {
    const std::array<double, 1> values{s};
    return estimate_laplace_multi(cfg, values, threads).front();
}

/// Empirical serving-distance distribution against its Rayleigh law.
struct ServingDistanceSummary {
    std::int64_t samples = 0;
    double ks_statistic = 0.0; // against Rayleigh(sqrt(2) sigma)
    double mean_m = 0.0;
    std::array<double, 5> quantiles_m{}; // at probabilities {.1,.25,.5,.75,.9}
};

inline ServingDistanceSummary simulate_serving_distance(const McConfig& cfg) {
    cfg.validate();
    const double sigma = cfg.network.sigma_m;
    std::vector<double> distances(static_cast<std::size_t>(cfg.realizations));
    detail::KahanSum mean_acc;
    for (std::int64_t r = 0; r < cfg.realizations; ++r) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
        auto [cx, cy] = rng.gaussian_pair(sigma);
        auto [sx, sy] = rng.gaussian_pair(sigma);
        distances[static_cast<std::size_t>(r)] = std::hypot(cx + sx, cy + sy);
        mean_acc.add(distances[static_cast<std::size_t>(r)]);
    }
    std::sort(distances.begin(), distances.end());

    ServingDistanceSummary summary;
    summary.samples = cfg.realizations;
    summary.mean_m = mean_acc.sum / static_cast<double>(cfg.realizations);

    const double n = static_cast<double>(cfg.realizations);
    double ks = 0.0;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        const double cdf = serving_distance_cdf(distances[i], sigma);
        const double low = static_cast<double>(i) / n;
        const double high = static_cast<double>(i + 1) / n;
        ks = std::max({ks, cdf - low, high - cdf});
    }
    summary.ks_statistic = ks;

    const std::array<double, 5> probs{0.1, 0.25, 0.5, 0.75, 0.9};
    for (std::size_t k = 0; k < probs.size(); ++k) {
        const double pos = probs[k] * (n - 1.0);
        const auto idx = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(idx);
        const double upper = distances[std::min(idx + 1, distances.size() - 1)];
        summary.quantiles_m[k] = distances[idx] * (1.0 - frac) + upper * frac;
    }
    return summary;
}

} // namespace d2dcache
