// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "d2dcache/coverage.hpp"
#include "d2dcache/geometry.hpp"

using namespace d2dcache;

namespace {

LinkParams table_defaults() {
    LinkParams p;
    p.theta = 1.0; // 0 dB
    p.alpha = 4.0;
    p.sigma_m = 10.0;
    p.lambda_p_per_m2 = 50e-6; // 50 clusters per km^2
    p.tx_power_w = 0.199526231496888;
    p.bandwidth_hz = 20e6;
    return p;
}

// coverage by direct quadrature of the Laplace transform against the serving
// distance density (the integral the closed form collapses)
double coverage_by_quadrature(const LinkParams& p) {
    auto integrand = [&p](double r) {
        const double s = p.theta * std::pow(r, p.alpha) / p.tx_power_w;
        return laplace_inter_cluster(s, p.lambda_p_per_m2, p.tx_power_w, p.alpha) *
               serving_distance_pdf(r, p.sigma_m);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, 400.0 * p.sigma_m, 14, 1e-12);
}

} // namespace

TEST_CASE("laplace transform of inter-cluster interference") {
    const double lambda_p = 50e-6;
    const double p_d = 0.199526231496888;

    SECTION("value one at s = 0") {
        CHECK(laplace_inter_cluster(0.0, lambda_p, p_d, 4.0) == 1.0);
    }

    SECTION("negative s rejected") {
        CHECK_THROWS_AS(laplace_inter_cluster(-1.0, lambda_p, p_d, 4.0),
                        std::invalid_argument);
    }

    SECTION("matches the hand-evaluated exponential at sP=1, alpha=4") {
        // exp(-pi lambda_p * 1 * Gamma(1.5)Gamma(0.5)) = exp(-pi lambda_p pi/2)
        const double expected =
            std::exp(-std::numbers::pi * lambda_p * std::numbers::pi / 2.0);
        CHECK(laplace_inter_cluster(1.0 / p_d, lambda_p, p_d, 4.0) ==
              Catch::Approx(expected).epsilon(1e-13));
        CHECK(expected == Catch::Approx(0.999753290327810).epsilon(1e-12));
    }

    SECTION("strictly decreasing in s") {
        double previous = 1.0;
        for (double s = 0.5; s < 1e4; s *= 3.0) {
            const double value = laplace_inter_cluster(s, lambda_p, p_d, 4.0);
            CHECK(value < previous);
            CHECK(value > 0.0);
            previous = value;
        }
    }

    SECTION("log-linear in lambda_p") {
        const double s = 2.0;
        const double l1 = std::log(laplace_inter_cluster(s, lambda_p, p_d, 4.0));
        const double l2 = std::log(laplace_inter_cluster(s, 2.0 * lambda_p, p_d, 4.0));
        const double l3 = std::log(laplace_inter_cluster(s, 3.0 * lambda_p, p_d, 4.0));
        CHECK(l2 == Catch::Approx(2.0 * l1).epsilon(1e-10));
        CHECK(l3 == Catch::Approx(3.0 * l1).epsilon(1e-10));
    }
}

TEST_CASE("d2d coverage closed form") {
    SECTION("table defaults give 0.9102") {
        // 1 / (1 + 4*100*pi*50e-6*(pi/2)) evaluated independently
        const double expected = 1.0 / (1.0 + 200.0 * std::numbers::pi * std::numbers::pi * 50e-6);
        const auto result = d2d_coverage(table_defaults());
        CHECK(result.probability == Catch::Approx(expected).epsilon(1e-12));
        CHECK(result.probability == Catch::Approx(0.910169837646275).epsilon(1e-10));
        CHECK(std::abs(result.probability - 0.910) < 1e-3);
        CHECK(result.method == CoverageMethod::closed_form);
        CHECK(result.ci_halfwidth == 0.0);
    }

    SECTION("sigma = 20 m gives 0.7170") {
        auto params = table_defaults();
        params.sigma_m = 20.0;
        CHECK(d2d_coverage(params).probability ==
              Catch::Approx(0.716956800324898).epsilon(1e-10));
    }

    SECTION("coverage approaches one as theta -> 0+") {
        auto params = table_defaults();
        params.theta = 1e-12;
        CHECK(d2d_coverage(params).probability > 1.0 - 1e-5);
    }

    SECTION("monotone decreasing in sigma, theta and lambda_p") {
        auto params = table_defaults();
        double previous = 2.0;
        for (double sigma : {5.0, 10.0, 20.0, 40.0, 80.0}) {
            params.sigma_m = sigma;
            const double p = d2d_coverage(params).probability;
            CHECK(p < previous);
            previous = p;
        }
        params = table_defaults();
        previous = 2.0;
        for (double theta_db : {-10.0, -3.0, 0.0, 3.0, 10.0}) {
            params.theta = std::pow(10.0, theta_db / 10.0);
            const double p = d2d_coverage(params).probability;
            CHECK(p < previous);
            previous = p;
        }
        params = table_defaults();
        previous = 2.0;
        for (double scale : {0.5, 1.0, 2.0, 4.0}) {
            params.lambda_p_per_m2 = 50e-6 * scale;
            const double p = d2d_coverage(params).probability;
            CHECK(p < previous);
            previous = p;
        }
    }

    SECTION("invalid parameters rejected") {
        auto params = table_defaults();
        params.alpha = 2.0;
        CHECK_THROWS_AS(d2d_coverage(params), std::invalid_argument);
        params = table_defaults();
        params.sigma_m = -1.0;
        CHECK_THROWS_AS(d2d_coverage(params), std::invalid_argument);
    }
}

TEST_CASE("closed form equals the coverage quadrature") {
    // end-to-end validation of the serving-distance integral collapse on a
    // 5x5 (sigma, theta) grid, tolerance 1e-8 relative
    auto params = table_defaults();
    for (double sigma : {5.0, 10.0, 15.0, 25.0, 40.0}) {
        for (double theta_db : {-6.0, -3.0, 0.0, 3.0, 6.0}) {
            params.sigma_m = sigma;
            params.theta = std::pow(10.0, theta_db / 10.0);
            const double closed = d2d_coverage(params).probability;
            const double integral = coverage_by_quadrature(params);
            INFO("sigma=" << sigma << " theta_db=" << theta_db);
            CHECK(std::abs(closed - integral) / closed < 1e-8);
        }
    }
}

TEST_CASE("bs coverage") {
    SECTION("theta = 0 dB, alpha = 4") {
        const auto result = bs_coverage(1.0, 4.0);
        // 1/(1 + pi/4), the arctangent integral evaluated exactly
        CHECK(result.probability ==
              Catch::Approx(1.0 / (1.0 + std::numbers::pi / 4.0)).epsilon(1e-12));
        CHECK(result.probability == Catch::Approx(0.560099153511557).epsilon(1e-10));
    }

    SECTION("coverage approaches one as theta -> 0+") {
        CHECK(bs_coverage(1e-12, 4.0).probability > 1.0 - 1e-9);
    }

    SECTION("decreasing in theta") {
        double previous = 2.0;
        for (double theta = 0.01; theta < 1000.0; theta *= 4.0) {
            const double p = bs_coverage(theta, 4.0).probability;
            CHECK(p < previous);
            previous = p;
        }
    }

    SECTION("invalid parameters rejected") {
        CHECK_THROWS_AS(bs_coverage(0.0, 4.0), std::invalid_argument);
        CHECK_THROWS_AS(bs_coverage(1.0, 2.0), std::invalid_argument);
    }
}

TEST_CASE("fixed-rate throughput") {
    CHECK(avg_rate_bps(20e6, 1.0, 0.0) == 0.0);
    CHECK(avg_rate_bps(20e6, 1.0, 0.9102) == Catch::Approx(18.204e6).epsilon(1e-12));
    CHECK(avg_rate_bps(20e6, 1.0, 0.5602) == Catch::Approx(11.204e6).epsilon(1e-12));

    SECTION("linear in coverage and bandwidth") {
        const double base = avg_rate_bps(10e6, 3.0, 0.25);
        CHECK(avg_rate_bps(10e6, 3.0, 0.5) == Catch::Approx(2.0 * base).epsilon(1e-13));
        CHECK(avg_rate_bps(30e6, 3.0, 0.25) == Catch::Approx(3.0 * base).epsilon(1e-13));
    }

    SECTION("invalid inputs rejected") {
        CHECK_THROWS_AS(avg_rate_bps(-1.0, 1.0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(avg_rate_bps(1.0, 1.0, 1.5), std::invalid_argument);
    }
}
