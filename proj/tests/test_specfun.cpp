#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bisphere/specfun.hpp"
#include "oracles.hpp"

using namespace bisphere::specfun;
constexpr double pi = std::numbers::pi;

TEST_CASE("legendre sequence endpoint values") {
    const auto at_one = legendre_sequence(1.0, 5);
    for (double v : at_one) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    const auto at_minus_one = legendre_sequence(-1.0, 3);
    CHECK(at_minus_one[0] == doctest::Approx(1.0));
    CHECK(at_minus_one[1] == doctest::Approx(-1.0));
    CHECK(at_minus_one[2] == doctest::Approx(1.0));
    CHECK(at_minus_one[3] == doctest::Approx(-1.0));
}

TEST_CASE("legendre sequence at x = 0.5") {
    const auto p = legendre_sequence(0.5, 2);
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[2] == doctest::Approx(-0.125).epsilon(1e-15)); // (3 x^2 - 1)/2
}

TEST_CASE("legendre closed forms n <= 4 on an x grid") {
    for (int i = 0; i <= 100; ++i) {
        const double x = -1.0 + 2.0 * i / 100.0;
        const auto p = legendre_sequence(x, 4);
        for (int n = 0; n <= 4; ++n)
            CHECK(p[n] == doctest::Approx(oracles::legendre_closed(n, x)).epsilon(1e-13));
    }
}

TEST_CASE("legendre recurrence and bound properties") {
    oracles::Halton h{2};
    for (int trial = 0; trial < 50; ++trial) {
        const double x = -1.0 + 2.0 * h.next();
        const auto p = legendre_sequence(x, 40);
        for (int n = 1; n < 40; ++n) {
            const double lhs = (n + 1.0) * p[n + 1];
            const double rhs = (2.0 * n + 1.0) * x * p[n] - n * p[n - 1];
            CHECK(std::fabs(lhs - rhs) <= 1e-13 * std::max(1.0, std::fabs(rhs)));
        }
        for (double v : p) CHECK(std::fabs(v) <= 1.0 + 1e-12);
    }
}

TEST_CASE("legendre stream matches the sequence") {
    const auto p = legendre_sequence(0.3, 20);
    LegendreStream stream(0.3);
    for (int n = 0; n <= 20; ++n) CHECK(stream.next() == doctest::Approx(p[n]).epsilon(1e-15));
}

TEST_CASE("legendre domain errors") {
    CHECK_THROWS_AS(legendre_sequence(1.5, 3), std::domain_error);
    CHECK_THROWS_AS(legendre_sequence(-1.0 - 1e-9, 3), std::domain_error);
    CHECK_THROWS_AS(legendre_sequence(0.5, -1), std::domain_error);
}

TEST_CASE("polygamma anchor values") {
    CHECK(polygamma(0, 1.0) == doctest::Approx(-euler_gamma()).epsilon(1e-12));
    CHECK(polygamma(1, 0.5) == doctest::Approx(pi * pi / 2.0).epsilon(1e-12));
    CHECK(polygamma(3, 0.5) == doctest::Approx(pi * pi * pi * pi).epsilon(1e-12));
    // sign pattern (-1)^{k+1} for k >= 1
    for (int k = 1; k <= 6; ++k) {
        const double v = polygamma(k, 1.7);
        CHECK((k % 2 == 1 ? v > 0.0 : v < 0.0));
    }
}

TEST_CASE("polygamma agrees with the brute-force series on (0, 1]") {
    for (int k = 1; k <= 3; ++k)
        for (double z : {0.1, 0.25, 0.5, 0.75, 1.0}) {
            const double ref = oracles::polygamma_series(k, z);
            CHECK(polygamma(k, z) == doctest::Approx(ref).epsilon(1e-10));
        }
}

TEST_CASE("digamma agrees with its defining series") {
    for (double z : {0.4, 1.0, 2.5}) {
        const double ref = oracles::digamma_series(z, euler_gamma());
        CHECK(polygamma(0, z) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("polygamma recurrence property") {
    for (int k = 0; k <= 5; ++k)
        for (double z : {0.1, 0.3, 0.5, 1.0, 2.0, 7.0}) {
            double kfac = 1.0;
            for (int i = 2; i <= k; ++i) kfac *= i;
            const double step = (k % 2 == 0 ? 1.0 : -1.0) * kfac * std::pow(z, -(k + 1));
            const double lhs = polygamma(k, z + 1.0);
            const double rhs = polygamma(k, z) + step;
            const double scale = std::max({1.0, std::fabs(lhs), std::fabs(step)});
            CHECK(std::fabs(lhs - rhs) / scale <= 1e-11);
        }
}

TEST_CASE("polygamma domain errors") {
    CHECK_THROWS_AS(polygamma(0, 0.0), std::domain_error);
    CHECK_THROWS_AS(polygamma(1, -2.0), std::domain_error);
    CHECK_THROWS_AS(polygamma(-1, 1.0), std::domain_error);
}

TEST_CASE("zeta at integer arguments") {
    CHECK(riemann_zeta_int(2) == doctest::Approx(pi * pi / 6.0).epsilon(1e-13));
    CHECK(riemann_zeta_int(4) == doctest::Approx(pi * pi * pi * pi / 90.0).epsilon(1e-13));
    CHECK(riemann_zeta_int(3) == doctest::Approx(oracles::zeta_direct(3)).epsilon(1e-13));
    CHECK(riemann_zeta_int(3) == doctest::Approx(1.2020569032).epsilon(1e-10));
    // the table and the direct-sum branch cross-check each other beyond s = 20
    for (int s : {21, 25, 30})
        CHECK(riemann_zeta_int(s) == doctest::Approx(oracles::zeta_direct(s)).epsilon(1e-14));
    CHECK_THROWS_AS(riemann_zeta_int(1), std::domain_error);
}

TEST_CASE("euler gamma constant") {
    CHECK(euler_gamma() == doctest::Approx(0.57721566490153).epsilon(1e-14));
    CHECK(euler_gamma() == doctest::Approx(oracles::euler_gamma_limit()).epsilon(1e-12));
    CHECK(polygamma(0, 1.0) == doctest::Approx(-euler_gamma()).epsilon(1e-12));
    // psi_0(2) = 1 - gamma by the recurrence
    CHECK(polygamma(0, 2.0) == doctest::Approx(1.0 - euler_gamma()).epsilon(1e-12));
}
