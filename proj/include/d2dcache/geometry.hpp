// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dcache/rng.hpp"
#include "d2dcache/special.hpp"

namespace d2dcache {

/// Planar point, coordinates in meters.
struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point2D& a, const Point2D& b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// One cluster: a parent point plus Gaussian-scattered member offsets.
struct ClusterRealization {
    Point2D center;
    std::vector<Point2D> members; // offsets relative to center
};

/// A sampled snapshot of the whole network inside a disc window.
struct NetworkRealization {
    std::vector<ClusterRealization> clusters;
    std::vector<Point2D> bs_points;
    double window_radius_m = 0.0;
    std::uint64_t seed = 0;
};

/// Window radius at which truncated interference is negligible (< 0.1% of
/// the mean inter-cluster term for alpha > 2).
inline double default_window_radius(double lambda_p_per_m2) {
    if (lambda_p_per_m2 <= 0.0)
        throw std::invalid_argument("default_window_radius: lambda_p must be > 0");
    return 20.0 / std::sqrt(lambda_p_per_m2);
}

/// Homogeneous PPP on a disc window centered at the origin.
inline std::vector<Point2D> sample_ppp(double density_per_m2, double window_radius_m,
                                       RngStream& rng) {
    if (density_per_m2 <= 0.0)
        throw std::invalid_argument("sample_ppp: density must be > 0");
    if (window_radius_m <= 0.0)
        throw std::invalid_argument("sample_ppp: window radius must be > 0");
    const double mean = density_per_m2 * std::numbers::pi * window_radius_m * window_radius_m;
    const std::uint64_t count = rng.poisson(mean);
    std::vector<Point2D> points;
    points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        auto [x, y] = rng.disc_point(window_radius_m);
        points.push_back({x, y});
    }
    return points;
}

/// Exactly n member offsets, i.i.d. isotropic Gaussian with per-coordinate
/// standard deviation sigma (offset norm is Rayleigh(sigma)).
inline ClusterRealization sample_cluster_members(Point2D center, double sigma_m, int n_members,
                                                 RngStream& rng) {
    if (sigma_m <= 0.0)
        throw std::invalid_argument("sample_cluster_members: sigma must be > 0");
    if (n_members < 1)
        throw std::invalid_argument("sample_cluster_members: member count must be >= 1");
    ClusterRealization cluster;
    cluster.center = center;
    cluster.members.reserve(static_cast<std::size_t>(n_members));
    for (int i = 0; i < n_members; ++i) {
        auto [dx, dy] = rng.gaussian_pair(sigma_m);
        cluster.members.push_back({dx, dy});
    }
    return cluster;
}

/// Density of the serving distance between two independent Gaussian
/// daughters of the same parent: Rayleigh with scale sqrt(2)*sigma,
/// f(r) = r/(2 sigma^2) * exp(-r^2 / (4 sigma^2)).
inline double serving_distance_pdf(double r_m, double sigma_m) {
    if (sigma_m <= 0.0)
        throw std::invalid_argument("serving_distance_pdf: sigma must be > 0");
    if (r_m < 0.0)
        throw std::invalid_argument("serving_distance_pdf: negative distance");
    const double s2 = sigma_m * sigma_m;
    return r_m / (2.0 * s2) * std::exp(-r_m * r_m / (4.0 * s2));
}

/// CDF companion of serving_distance_pdf.
inline double serving_distance_cdf(double r_m, double sigma_m) {
    if (sigma_m <= 0.0)
        throw std::invalid_argument("serving_distance_cdf: sigma must be > 0");
    if (r_m < 0.0)
        throw std::invalid_argument("serving_distance_cdf: negative distance");
    return 1.0 - std::exp(-r_m * r_m / (4.0 * sigma_m * sigma_m));
}

/// Rice density of the distance u from the origin to a point Gaussian-
/// scattered (std sigma per coordinate) around a center at distance v.
/// Evaluated with the scaled Bessel function so large u*v/sigma^2 does not
/// overflow.
inline double rice_conditional_pdf(double u_m, double v_m, double sigma_m) {
    if (sigma_m <= 0.0)
        throw std::invalid_argument("rice_conditional_pdf: sigma must be > 0");
    if (u_m < 0.0 || v_m < 0.0)
        throw std::invalid_argument("rice_conditional_pdf: negative distance");
    const double s2 = sigma_m * sigma_m;
    const double diff = u_m - v_m;
    return u_m / s2 * std::exp(-diff * diff / (2.0 * s2)) * bessel_i0_scaled(u_m * v_m / s2);
}

/// Full network snapshot: parent PPP with exactly n Gaussian members per
/// cluster, plus an independent BS PPP, all inside the window. Sub-streams
/// are derived from the seed by a counter, so the realization is
/// reproducible and clusters could be filled in parallel.
inline NetworkRealization sample_network(double lambda_p_per_m2, int members_per_cluster,
                                         double sigma_m, double lambda_bs_per_m2,
                                         double window_radius_m, std::uint64_t seed) {
    NetworkRealization net;
    net.window_radius_m = window_radius_m;
    net.seed = seed;

    RngStream parent_rng(seed, 0);
    const auto parents = sample_ppp(lambda_p_per_m2, window_radius_m, parent_rng);
    net.clusters.reserve(parents.size());
    std::uint64_t stream = 1;
    for (const auto& parent : parents) {
        RngStream member_rng(seed, stream++);
        net.clusters.push_back(sample_cluster_members(parent, sigma_m, members_per_cluster, member_rng));
    }

    RngStream bs_rng(seed, std::uint64_t{1} << 40); // disjoint from member streams
    net.bs_points = sample_ppp(lambda_bs_per_m2, window_radius_m, bs_rng);
    return net;
}

} // namespace d2dcache
