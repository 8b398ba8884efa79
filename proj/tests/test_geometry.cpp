// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "d2dcache/geometry.hpp"

using namespace d2dcache;

namespace {

double integrate(auto f, double lo, double hi) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 12, 1e-13);
}

double rayleigh_cdf(double r, double scale) {
    return 1.0 - std::exp(-r * r / (2.0 * scale * scale));
}

double ks_statistic(std::vector<double> samples, auto cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double c = cdf(samples[i]);
        ks = std::max({ks, c - static_cast<double>(i) / n,
                       static_cast<double>(i + 1) / n - c});
    }
    return ks;
}

// chi-square upper quantile via the Wilson-Hilferty approximation
double chi_square_quantile(double df, double z) {
    const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
    return df * t * t * t;
}

} // namespace

TEST_CASE("sample_ppp rejects degenerate parameters") {
    RngStream rng(1);
    CHECK_THROWS_AS(sample_ppp(0.0, 100.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_ppp(-1.0, 100.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_ppp(1e-5, 0.0, rng), std::invalid_argument);
}

TEST_CASE("sample_ppp mean count matches density times area") {
    // density 50e-6 per m^2, radius 1000 m: mean = 50e-6*pi*1e6 = 157.0796
    const double density = 50e-6;
    const double radius = 1000.0;
    const double expected = density * std::numbers::pi * radius * radius;
    const int draws = 10000;
    double total = 0.0;
    for (int i = 0; i < draws; ++i) {
        RngStream rng(99, static_cast<std::uint64_t>(i));
        total += static_cast<double>(sample_ppp(density, radius, rng).size());
    }
    const double mean = total / draws;
    const double sd_of_mean = std::sqrt(expected / draws);
    CHECK(std::abs(mean - expected) < 3.0 * sd_of_mean);
}

TEST_CASE("sample_ppp is deterministic for a fixed seed") {
    RngStream a(7, 3);
    RngStream b(7, 3);
    const auto p1 = sample_ppp(5e-5, 800.0, a);
    const auto p2 = sample_ppp(5e-5, 800.0, b);
    REQUIRE(p1.size() == p2.size());
    for (std::size_t i = 0; i < p1.size(); ++i) {
        CHECK(p1[i].x == p2[i].x);
        CHECK(p1[i].y == p2[i].y);
    }
}

TEST_CASE("sub-window counts of sample_ppp are Poisson (chi-square)") {
    const double density = 50e-6;
    const double radius = 1000.0;
    const double sub_radius = 350.0;
    const double mean = density * std::numbers::pi * sub_radius * sub_radius; // ~19.2
    const int draws = 10000;

    std::vector<int> histogram(200, 0);
    for (int i = 0; i < draws; ++i) {
        RngStream rng(123, static_cast<std::uint64_t>(i));
        int count = 0;
        for (const auto& p : sample_ppp(density, radius, rng))
            if (p.x * p.x + p.y * p.y < sub_radius * sub_radius)
                ++count;
        ++histogram[static_cast<std::size_t>(std::min(count, 199))];
    }

    // merge bins so every expected count is at least 5
    std::vector<double> observed, expected;
    double exp_acc = 0.0, obs_acc = 0.0;
    double log_mean = std::log(mean);
    for (int k = 0; k < 200; ++k) {
        const double pmf = std::exp(k * log_mean - mean - std::lgamma(k + 1.0));
        exp_acc += draws * pmf;
        obs_acc += histogram[static_cast<std::size_t>(k)];
        if (exp_acc >= 5.0) {
            observed.push_back(obs_acc);
            expected.push_back(exp_acc);
            exp_acc = obs_acc = 0.0;
        }
    }
    // tail bin
    if (exp_acc > 0.0 && !expected.empty()) {
        expected.back() += exp_acc;
        observed.back() += obs_acc;
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double d = observed[i] - expected[i];
        chi2 += d * d / expected[i];
    }
    const double df = static_cast<double>(expected.size()) - 1.0;
    INFO("chi2 = " << chi2 << ", df = " << df);
    CHECK(chi2 < chi_square_quantile(df, 3.09)); // 0.1% level
}

TEST_CASE("cluster member sampling obeys the Gaussian scatter law") {
    const double sigma = 10.0;

    SECTION("parameter validation") {
        RngStream rng(1);
        CHECK_THROWS_AS(sample_cluster_members({0, 0}, 0.0, 5, rng), std::invalid_argument);
        CHECK_THROWS_AS(sample_cluster_members({0, 0}, sigma, 0, rng), std::invalid_argument);
    }

    SECTION("n = 1 yields exactly one member") {
        RngStream rng(2);
        CHECK(sample_cluster_members({0, 0}, sigma, 1, rng).members.size() == 1);
    }

    SECTION("mean squared offset norm is 2 sigma^2") {
        const int draws = 100000;
        RngStream rng(3);
        double sum = 0.0;
        for (int i = 0; i < draws / 10; ++i) {
            const auto cluster = sample_cluster_members({5, -3}, sigma, 10, rng);
            for (const auto& m : cluster.members)
                sum += m.x * m.x + m.y * m.y;
        }
        const double mean = sum / draws;
        // ||y||^2 = sigma^2 chi^2_2, var = 4 sigma^4
        const double sd_of_mean = 2.0 * sigma * sigma / std::sqrt(static_cast<double>(draws));
        CHECK(std::abs(mean - 2.0 * sigma * sigma) < 3.0 * sd_of_mean);
    }

    SECTION("offset norm is Rayleigh(sigma) by Kolmogorov-Smirnov") {
        const int draws = 100000;
        std::vector<double> norms;
        norms.reserve(draws);
        RngStream rng(4);
        const auto cluster = sample_cluster_members({0, 0}, sigma, draws, rng);
        for (const auto& m : cluster.members)
            norms.push_back(std::hypot(m.x, m.y));
        const double ks =
            ks_statistic(std::move(norms), [&](double r) { return rayleigh_cdf(r, sigma); });
        CHECK(ks < 1.62762 / std::sqrt(static_cast<double>(draws))); // level 0.01
    }
}

TEST_CASE("serving distance pdf") {
    const double sigma = 10.0;

    CHECK(serving_distance_pdf(0.0, sigma) == 0.0);
    CHECK_THROWS_AS(serving_distance_pdf(-1.0, sigma), std::invalid_argument);
    CHECK_THROWS_AS(serving_distance_pdf(1.0, 0.0), std::invalid_argument);

    SECTION("mode at sqrt(2) sigma") {
        const double mode = std::sqrt(2.0) * sigma; // 14.1421 for sigma=10
        double best_r = 0.0, best = -1.0;
        for (double r = 0.0; r < 100.0; r += 0.01) {
            const double v = serving_distance_pdf(r, sigma);
            if (v > best) {
                best = v;
                best_r = r;
            }
        }
        CHECK(best_r == Catch::Approx(mode).margin(0.011));
    }

    SECTION("normalizes to one") {
        for (double s : {3.0, 10.0, 25.0}) {
            const double total = integrate(
                [s](double r) { return serving_distance_pdf(r, s); }, 0.0, 200.0 * s);
            CHECK(total == Catch::Approx(1.0).margin(1e-9));
        }
    }

    SECTION("cdf is consistent with the pdf") {
        const double r0 = 17.0;
        const double partial =
            integrate([sigma](double r) { return serving_distance_pdf(r, sigma); }, 0.0, r0);
        CHECK(partial == Catch::Approx(serving_distance_cdf(r0, sigma)).margin(1e-10));
    }
}

TEST_CASE("rice conditional pdf") {
    const double sigma = 10.0;

    CHECK_THROWS_AS(rice_conditional_pdf(-1.0, 5.0, sigma), std::invalid_argument);
    CHECK_THROWS_AS(rice_conditional_pdf(1.0, -5.0, sigma), std::invalid_argument);
    CHECK_THROWS_AS(rice_conditional_pdf(1.0, 5.0, 0.0), std::invalid_argument);

    SECTION("v = 0 reduces to Rayleigh(sigma)") {
        for (double u = 0.0; u < 60.0; u += 3.7) {
            const double rayleigh =
                u / (sigma * sigma) * std::exp(-u * u / (2.0 * sigma * sigma));
            CHECK(rice_conditional_pdf(u, 0.0, sigma) ==
                  Catch::Approx(rayleigh).margin(1e-14));
        }
    }

    SECTION("normalizes to one for several center distances") {
        for (double v : {sigma, 5.0 * sigma, 20.0 * sigma}) {
            const double total = integrate(
                [v, sigma](double u) { return rice_conditional_pdf(u, v, sigma); }, 0.0,
                v + 60.0 * sigma);
            CHECK(total == Catch::Approx(1.0).margin(1e-9));
        }
    }

    SECTION("average of v against the conditional density returns u") {
        // the identity behind the interference derivation:
        // int_0^inf Rice(u | v, sigma) v dv = u
        for (double u : {0.5 * sigma, 2.0 * sigma, 10.0 * sigma}) {
            const double value = integrate(
                [u, sigma](double v) { return rice_conditional_pdf(u, v, sigma) * v; }, 0.0,
                u + 60.0 * sigma);
            CHECK(value == Catch::Approx(u).epsilon(1e-8));
        }
    }
}

TEST_CASE("network realization invariants") {
    const double lambda_p = 5e-5;
    const double window = 1000.0;
    const auto net = sample_network(lambda_p, 10, 10.0, 5e-6, window, 2024);

    SECTION("all centers and BS points are inside the window") {
        for (const auto& cluster : net.clusters)
            CHECK(std::hypot(cluster.center.x, cluster.center.y) <= window);
        for (const auto& bs : net.bs_points)
            CHECK(std::hypot(bs.x, bs.y) <= window);
    }

    SECTION("fixed member count per cluster") {
        for (const auto& cluster : net.clusters)
            CHECK(cluster.members.size() == 10);
    }

    SECTION("byte-identical for the same seed") {
        const auto again = sample_network(lambda_p, 10, 10.0, 5e-6, window, 2024);
        REQUIRE(again.clusters.size() == net.clusters.size());
        for (std::size_t c = 0; c < net.clusters.size(); ++c) {
            CHECK(again.clusters[c].center.x == net.clusters[c].center.x);
            for (std::size_t m = 0; m < net.clusters[c].members.size(); ++m) {
                CHECK(again.clusters[c].members[m].x == net.clusters[c].members[m].x);
                CHECK(again.clusters[c].members[m].y == net.clusters[c].members[m].y);
            }
        }
        REQUIRE(again.bs_points.size() == net.bs_points.size());
    }

    SECTION("rotation leaves pairwise distances invariant") {
        std::vector<Point2D> flat;
        for (const auto& cluster : net.clusters)
            for (const auto& m : cluster.members)
                flat.push_back({cluster.center.x + m.x, cluster.center.y + m.y});

        const double angle = 0.6451;
        std::vector<Point2D> rotated;
        rotated.reserve(flat.size());
        for (const auto& p : flat)
            rotated.push_back({p.x * std::cos(angle) - p.y * std::sin(angle),
                               p.x * std::sin(angle) + p.y * std::cos(angle)});

        auto pairwise = [](const std::vector<Point2D>& pts) {
            std::vector<double> d;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < std::min(pts.size(), i + 40); ++j)
                    d.push_back(distance(pts[i], pts[j]));
            std::sort(d.begin(), d.end());
            return d;
        };
        const auto d1 = pairwise(flat);
        const auto d2 = pairwise(rotated);
        REQUIRE(d1.size() == d2.size());
        for (std::size_t i = 0; i < d1.size(); ++i)
            CHECK(d1[i] == Catch::Approx(d2[i]).epsilon(1e-9));
    }
}

TEST_CASE("total member intensity is n lambda_p") {
    const double lambda_p = 5e-5;
    const int n = 10;
    const double window = 1000.0;
    const int seeds = 200;
    double members = 0.0;
    for (int s = 0; s < seeds; ++s)
        members += static_cast<double>(
            sample_network(lambda_p, n, 10.0, 5e-6, window, 5000 + s).clusters.size() * n);
    const double area = std::numbers::pi * window * window;
    const double density = members / (area * seeds);
    const double sd = n * std::sqrt(lambda_p * area) / (area * std::sqrt(seeds));
    CHECK(std::abs(density - n * lambda_p) < 3.0 * sd);
}

TEST_CASE("default window radius tracks the parent density") {
    CHECK(default_window_radius(5e-5) == Catch::Approx(20.0 / std::sqrt(5e-5)));
    CHECK_THROWS_AS(default_window_radius(0.0), std::invalid_argument);
}
