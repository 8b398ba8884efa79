// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <numbers>

#include "d2dcache/special.hpp"

using namespace d2dcache;

namespace {

// reference values computed with mpmath at 30 digits
struct Reference {
    double x;
    double value;
};

// independent evaluation of 2F1(1, -delta; 1-delta; -theta) through the
// coverage integral identity 1 + theta^delta * int_{theta^-delta}^inf
// du / (1 + u^(1/delta))
double hyp2f1_via_integral(double delta, double theta) {
    const double lower = std::pow(theta, -delta);
    boost::math::quadrature::exp_sinh<double> integrator;
    auto integrand = [delta, lower](double t) {
        return 1.0 / (1.0 + std::pow(lower + t, 1.0 / delta));
    };
    const double integral = integrator.integrate(integrand, 1e-14);
    return 1.0 + std::pow(theta, delta) * integral;
}

} // namespace

TEST_CASE("gamma function matches reference values") {
    CHECK(gamma_fn(1.0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(7.0) == Catch::Approx(720.0).epsilon(1e-13));

    const Reference refs[] = {
        {0.1, 9.51350769866873183629248717727},
        {0.5, 1.77245385090551602729816748334},
        {1.5, 0.886226925452758013649083741671},
        {2.7, 1.54468584585059376496059370319},
        {5.5, 52.3427777845535201811490084924},
        {9.99, 354802.01701983092734710139423},
    };
    for (const auto& ref : refs)
        CHECK(gamma_fn(ref.x) == Catch::Approx(ref.value).epsilon(1e-12));

    // sqrt(pi) identities
    CHECK(gamma_fn(0.5) == Catch::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(gamma_fn(1.5) == Catch::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("gamma product identity for alpha=4") {
    CHECK(gamma_fn(1.5) * gamma_fn(0.5) ==
          Catch::Approx(std::numbers::pi / 2.0).epsilon(1e-13));
}

TEST_CASE("gamma function rejects poles") {
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-7.0), std::domain_error);
    CHECK_NOTHROW(gamma_fn(-0.5));
}

TEST_CASE("scaled Bessel I0 matches reference values") {
    const Reference refs[] = {
        {0.25, 0.791017162139719363886188333232},
        {0.5, 0.645035270449150068107996629746},
        {1.0, 0.465759607593640436501901529563},
        {5.0, 0.183540812609328353073650751837},
        {10.0, 0.127833337163428607323050287645},
        {25.0, 0.0801967735474367084223925285356},
        {29.9, 0.073269219046001905950786857454}, // series branch
        {30.1, 0.0730232941310609435925611387592}, // asymptotic branch
        {50.0, 0.0565616266474541925299391880158},
        {100.0, 0.0399443792990966826475587051553},
        {1000.0, 0.0126172404558912565857161312899},
        {100000.0, 0.0012615678379767767668976195751},
    };
    CHECK(bessel_i0_scaled(0.0) == 1.0);
    for (const auto& ref : refs)
        CHECK(bessel_i0_scaled(ref.x) == Catch::Approx(ref.value).epsilon(1e-13));
    CHECK_THROWS_AS(bessel_i0_scaled(-1.0), std::invalid_argument);
}

TEST_CASE("2F1 at z=0 is one") {
    CHECK(gauss_2f1(1.0, -0.5, 0.5, 0.0) == 1.0);
    CHECK(gauss_2f1(0.3, 2.0, 4.5, 0.0) == 1.0);
}

TEST_CASE("2F1 matches reference values on negative axis") {
    // 1 + pi/4, via the closed-form arctangent integral
    CHECK(gauss_2f1(1.0, -0.5, 0.5, -1.0) ==
          Catch::Approx(1.0 + std::numbers::pi / 4.0).epsilon(1e-12));

    const struct {
        double a, b, c, z, value;
    } refs[] = {
        {1.0, -0.5, 0.5, -1000.0, 49.673274462456585628079352871},
        {1.0, -2.0 / 3.0, 1.0 / 3.0, -1.0, 2.6712976965294421066742069194},
        {1.0, -2.0 / 3.0, 1.0 / 3.0, -10.0, 11.2628831175191184005123512108},
        {0.5, -0.25, 1.3, -2.5, 1.16482189288319451286293162672},
        {1.0, -1.0 / 3.0, 0.9, -7.0, 2.07952108731565801354228954759},
    };
    for (const auto& ref : refs)
        CHECK(gauss_2f1(ref.a, ref.b, ref.c, ref.z) ==
              Catch::Approx(ref.value).epsilon(1e-10));
}

TEST_CASE("2F1 series agrees with the integral route") {
    // the two evaluation routes of the design must agree to 1e-10
    for (double alpha : {2.5, 3.0, 4.0, 6.0}) {
        const double delta = 2.0 / alpha;
        for (double theta_db : {-10.0, -3.0, 0.0, 3.0, 10.0, 20.0}) {
            const double theta = std::pow(10.0, theta_db / 10.0);
            const double series = gauss_2f1(1.0, -delta, 1.0 - delta, -theta);
            const double integral = hyp2f1_via_integral(delta, theta);
            INFO("alpha=" << alpha << " theta_db=" << theta_db);
            CHECK(series == Catch::Approx(integral).epsilon(1e-10));
        }
    }
}

TEST_CASE("2F1 monotone increasing along z=-theta") {
    const double delta = 0.5;
    double previous = 1.0;
    for (double theta = 0.05; theta < 40.0; theta *= 1.7) {
        const double value = gauss_2f1(1.0, -delta, 1.0 - delta, -theta);
        CHECK(value > previous);
        previous = value;
    }
}

TEST_CASE("2F1 rejects bad arguments") {
    CHECK_THROWS_AS(gauss_2f1(1.0, -0.5, 0.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(gauss_2f1(1.0, -0.5, -2.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(gauss_2f1(1.0, -0.5, 0.5, 0.5), std::invalid_argument);
}
