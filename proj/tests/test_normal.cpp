#include <doctest.h>

#include <cmath>

#include "locreq/normal.hpp"
#include "oracles.hpp"

using namespace locreq;

TEST_CASE("norm_cdf matches the quadrature oracle") {
    for (double x : {-6.0, -3.0, -1.5, -0.5, 0.0, 0.3, 1.0, 2.5, 4.5, 6.0}) {
        CHECK(std::fabs(norm_cdf(x) - oracle::norm_cdf(x)) < 1e-12);
    }
}

TEST_CASE("norm_quantile matches the bisection oracle to well below 1e-8") {
    for (double p : {1e-9, 1e-6, 0.001, 0.05, 0.3, 0.5, 0.7, 0.975, 0.9969, 0.999999}) {
        CHECK(std::fabs(norm_quantile(p) - oracle::norm_quantile(p)) < 1e-8);
    }
}

TEST_CASE("norm_quantile inverts norm_cdf") {
    for (double x = -5.0; x <= 5.0; x += 0.25) {
        CHECK(std::fabs(norm_quantile(norm_cdf(x)) - x) < 1e-9);
    }
}

TEST_CASE("norm_quantile anchors") {
    CHECK(norm_quantile(0.5) == doctest::Approx(0.0));
    CHECK(std::fabs(norm_quantile(0.975) - 1.959963984540054) < 1e-9);
}

TEST_CASE("norm_quantile domain errors") {
    CHECK_THROWS_AS((void)norm_quantile(0.0), Error);
    CHECK_THROWS_AS((void)norm_quantile(1.0), Error);
    CHECK_THROWS_AS((void)norm_quantile(-0.2), Error);
    CHECK_THROWS_AS((void)norm_quantile(std::nan("")), Error);
}
