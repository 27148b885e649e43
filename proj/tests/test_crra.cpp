#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sfcapm/crra.hpp"
#include "testutil.hpp"

using sfcapm::CrraUtility;
using Catch::Approx;

TEST_CASE("curve values match hand arithmetic") {
    CHECK(CrraUtility(0.5).value(100.0) == Approx(20.0).epsilon(1e-12));
    CHECK(CrraUtility(2.0).value(1.0) == Approx(-1.0).epsilon(1e-12));
    CHECK(CrraUtility(1.0).value(1.0) == 0.0);
}

TEST_CASE("derivatives match hand arithmetic") {
    const CrraUtility half(0.5);
    CHECK(half.deriv1(100.0) == Approx(0.1).epsilon(1e-12));
    CHECK(half.deriv2(100.0) == Approx(-0.0005).epsilon(1e-12));
    CHECK(CrraUtility(0.0).deriv2(7.0) == 0.0);
}

TEST_CASE("inverse matches hand arithmetic") {
    CHECK(CrraUtility(0.5).inverse(20.0) == Approx(100.0).epsilon(1e-12));
    CHECK(CrraUtility(2.0).inverse(-1.0) == Approx(1.0).epsilon(1e-12));
    CHECK(CrraUtility(1.0).inverse(0.0) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("risk aversion measures") {
    CHECK(CrraUtility(2.0).absolute_risk_aversion(4.0) == Approx(0.5).epsilon(1e-12));
    CHECK(CrraUtility(2.0).relative_risk_aversion(100.0) == 2.0);
    CHECK(CrraUtility(0.0).absolute_risk_aversion(3.0) == 0.0);
}

TEST_CASE("domain errors") {
    const CrraUtility curve(0.5);
    CHECK_THROWS_AS(curve.value(0.0), sfcapm::domain_error);
    CHECK_THROWS_AS(curve.value(-1.0), sfcapm::domain_error);
    CHECK_THROWS_AS(curve.deriv1(0.0), sfcapm::domain_error);
    CHECK_THROWS_AS(curve.deriv2(-2.0), sfcapm::domain_error);
    CHECK_THROWS_AS(curve.inverse(-3.0), sfcapm::domain_error); // needs (1-rho)v > 0
    CHECK_THROWS_AS(CrraUtility(2.0).inverse(0.5), sfcapm::domain_error);
    CHECK_THROWS_AS(CrraUtility(-0.1), sfcapm::domain_error);
    CHECK_THROWS_AS(CrraUtility(std::nan("")), sfcapm::domain_error);
    CHECK_THROWS_AS(curve.value(std::numeric_limits<double>::infinity()),
                    sfcapm::domain_error);
}

TEST_CASE("inverse(value(w)) recovers w") {
    std::mt19937 rng(42);
    for (int i = 0; i < 500; ++i) {
        double rho = testutil::uniform(rng, 0.0, 20.0);
        if (i % 7 == 0) rho = 1.0; // keep the log branch in the mix
        const double w = testutil::log_uniform(rng, 1e-2, 1e4);
        const CrraUtility curve(rho);
        CHECK(curve.inverse(curve.value(w)) == Approx(w).epsilon(1e-12));
    }
}

TEST_CASE("curvature ratio recovers rho at every wealth") {
    std::mt19937 rng(43);
    for (int i = 0; i < 500; ++i) {
        const double rho = testutil::uniform(rng, 0.0, 20.0);
        const double w = testutil::log_uniform(rng, 1e-2, 1e4);
        const CrraUtility curve(rho);
        const double recovered = -curve.deriv2(w) * w / curve.deriv1(w);
        CHECK(recovered == Approx(rho).margin(1e-12 * std::max(1.0, rho)));
    }
}

TEST_CASE("sign of utility follows sign of 1 - rho") {
    std::mt19937 rng(44);
    for (int i = 0; i < 200; ++i) {
        double rho = testutil::uniform(rng, 0.0, 5.0);
        if (rho == 1.0) continue;
        const double w = testutil::log_uniform(rng, 1e-2, 1e4);
        const double u = CrraUtility(rho).value(w);
        CHECK((u > 0.0) == (rho < 1.0));
    }
}

TEST_CASE("derivatives agree with central finite differences") {
    std::mt19937 rng(45);
    for (int i = 0; i < 200; ++i) {
        const double rho = testutil::uniform(rng, 0.0, 8.0);
        const double w = testutil::log_uniform(rng, 0.1, 1e3);
        const CrraUtility curve(rho);
        const double h = 1e-5 * w;
        const double fd1 = (curve.value(w + h) - curve.value(w - h)) / (2.0 * h);
        CHECK(fd1 == Approx(curve.deriv1(w)).epsilon(1e-6));
        const double fd2 = (curve.deriv1(w + h) - curve.deriv1(w - h)) / (2.0 * h);
        if (rho > 0.0)
            CHECK(fd2 == Approx(curve.deriv2(w)).epsilon(1e-6));
        else
            CHECK(std::abs(fd2) < 1e-12);
    }
}

TEST_CASE("value is increasing and concave for rho > 0") {
    std::mt19937 rng(46);
    for (int i = 0; i < 200; ++i) {
        const double rho = testutil::uniform(rng, 0.0, 10.0);
        const double w = testutil::log_uniform(rng, 1e-2, 1e4);
        const CrraUtility curve(rho);
        CHECK(curve.deriv1(w) > 0.0);
        if (rho > 0.0)
            CHECK(curve.deriv2(w) < 0.0);
        CHECK(curve.value(w * 1.01) > curve.value(w));
    }
}

TEST_CASE("large rho does not overflow prematurely") {
    // w^{1-rho} alone overflows here; the value itself is representable
    const CrraUtility curve(200.0);
    const double w = 0.028;
    CHECK(std::isinf(std::pow(w, 1.0 - 200.0)));
    const double u = curve.value(w);
    CHECK(std::isfinite(u));
    CHECK(u < 0.0);
    CHECK(curve.inverse(u) == Approx(w).epsilon(1e-10));
}
