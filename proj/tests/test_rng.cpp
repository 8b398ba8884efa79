// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "d2dcache/rng.hpp"

using namespace d2dcache;

TEST_CASE("identical seed and stream reproduce the sequence") {
    RngStream a(42, 7);
    RngStream b(42, 7);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(a.next() == b.next());
}

TEST_CASE("different streams from one master seed differ") {
    RngStream a(42, 0);
    RngStream b(42, 1);
    int equal = 0;
    for (int i = 0; i < 1000; ++i)
        equal += a.next() == b.next() ? 1 : 0;
    CHECK(equal == 0);
}

TEST_CASE("uniform moments") {
    RngStream rng(1);
    const int n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(var - 1.0 / 12.0) < 0.001);
}

TEST_CASE("exponential sampler has unit mean") {
    RngStream rng(2);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += rng.exponential();
    CHECK(std::abs(sum / n - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("gaussian pair has the requested scale") {
    RngStream rng(3);
    const int n = 500000;
    const double sigma = 2.5;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        auto [x, y] = rng.gaussian_pair(sigma);
        sum += x + y;
        sum_sq += x * x + y * y;
    }
    const double mean = sum / (2.0 * n);
    const double var = sum_sq / (2.0 * n);
    CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(2.0 * n));
    CHECK(var == Catch::Approx(sigma * sigma).epsilon(0.01));
}

TEST_CASE("poisson sampler matches mean and variance") {
    RngStream rng(4);
    for (double mean : {0.5, 4.0, 40.0, 700.0, 1256.6}) {
        const int n = mean > 100.0 ? 4000 : 100000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(rng.poisson(mean));
            sum += k;
            sum_sq += k * k;
        }
        const double sample_mean = sum / n;
        const double sample_var = sum_sq / n - sample_mean * sample_mean;
        INFO("mean=" << mean);
        CHECK(std::abs(sample_mean - mean) < 4.0 * std::sqrt(mean / n));
        CHECK(sample_var == Catch::Approx(mean).margin(4.0 * mean * std::sqrt(3.0 / n)));
    }
}

TEST_CASE("disc points stay inside the disc and fill it uniformly") {
    RngStream rng(5);
    const double radius = 10.0;
    const int n = 200000;
    int inner = 0;
    for (int i = 0; i < n; ++i) {
        auto [x, y] = rng.disc_point(radius);
        const double r2 = x * x + y * y;
        REQUIRE(r2 <= radius * radius);
        inner += r2 < 0.25 * radius * radius ? 1 : 0; // quarter of the area
    }
    const double frac = static_cast<double>(inner) / n;
    CHECK(std::abs(frac - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / n));
}
