#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sfcapm/pricing.hpp"
#include "testutil.hpp"

using namespace sfcapm;
using Catch::Approx;

namespace {

// printed system moments and the calibrated point
constexpr double kMu = 0.017215;
constexpr double kSigma2 = 0.001250;
constexpr double kBeta = 0.99;
constexpr double kZeta = 0.961745;
constexpr double kXi = 1.019392;
constexpr double kRho = 1.033526;

GrowthDistribution paper_dist() { return GrowthDistribution::iid_equilibrium(kMu, kSigma2); }

struct Draw {
    double beta, zeta, xi, rho, mu, sigma2;
};

// random admissible parameters satisfying the existence condition
Draw admissible_draw(std::mt19937& rng) {
    for (;;) {
        Draw d{testutil::uniform(rng, 0.8, 1.0),  testutil::uniform(rng, 0.5, 1.5),
               testutil::uniform(rng, 0.5, 1.5),  testutil::uniform(rng, 0.0, 5.0),
               testutil::uniform(rng, -0.03, 0.03), testutil::uniform(rng, 0.0, 0.005)};
        const double m =
            d.beta * d.zeta * lognormal_power_moment(d.mu, d.sigma2, 1.0 - d.rho);
        if (m < 0.995) return d;
    }
}

} // namespace

TEST_CASE("log moments from arithmetic moments") {
    const auto m = log_moments_from_arithmetic(1.018, 0.036);
    CHECK(m.mu == Approx(0.017215021714207).epsilon(1e-12));
    CHECK(m.sigma2 == Approx(0.001249792828248).epsilon(1e-12));
    // agreement with the published rounded coefficients
    CHECK(std::abs(m.mu - 0.017215) < 5e-6);
    CHECK(std::abs(m.sigma2 - 0.001250) < 5e-6);

    const auto degenerate = log_moments_from_arithmetic(1.0, 0.0);
    CHECK(degenerate.mu == 0.0);
    CHECK(degenerate.sigma2 == 0.0);
}

TEST_CASE("log moments round-trip to the arithmetic mean") {
    std::mt19937 rng(201);
    for (int i = 0; i < 500; ++i) {
        const double mean = testutil::uniform(rng, 0.5, 2.0);
        const double sd = testutil::uniform(rng, 0.0, 0.3);
        const auto m = log_moments_from_arithmetic(mean, sd);
        CHECK(std::exp(m.mu + 0.5 * m.sigma2) == Approx(mean).epsilon(1e-12));
        // and the implied arithmetic variance matches too
        const double implied_var =
            (std::exp(m.sigma2) - 1.0) * std::exp(2.0 * m.mu + m.sigma2);
        CHECK(implied_var == Approx(sd * sd).margin(1e-12));
    }
}

TEST_CASE("lognormal power moments") {
    CHECK(lognormal_power_moment(0.3, 0.2, 0.0) == 1.0);
    CHECK(lognormal_power_moment(kMu, kSigma2, 1.0) == Approx(1.018000083).margin(1e-8));
    CHECK(lognormal_power_moment(kMu, kSigma2, -kRho) == Approx(0.983021251).margin(1e-8));
    CHECK_THROWS_AS(lognormal_power_moment(0.0, -0.1, 1.0), domain_error);
}

TEST_CASE("lognormal power moments agree with quadrature") {
    std::mt19937 rng(202);
    for (int i = 0; i < 50; ++i) {
        const double mu = testutil::uniform(rng, -0.1, 0.1);
        const double sigma2 = testutil::uniform(rng, 0.0, 0.05);
        const double a = testutil::uniform(rng, -3.0, 3.0);
        const double closed = lognormal_power_moment(mu, sigma2, a);
        const double quad = testutil::lognormal_expectation(
            mu, sigma2, [a](double x) { return std::pow(x, a); });
        CHECK(closed == Approx(quad).epsilon(1e-9));
    }
}

TEST_CASE("price-dividend ratio at the calibrated point") {
    CHECK(price_dividend_ratio(kBeta, kZeta, kRho, paper_dist()) ==
          Approx(19.652135168).epsilon(1e-8));
}

TEST_CASE("price-dividend ratio degenerate and divergent cases") {
    CHECK(price_dividend_ratio(0.5, 1.0, 1.0, GrowthDistribution::iid_equilibrium(0, 0)) ==
          Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(
        price_dividend_ratio(1.0, 1.0, 0.0, GrowthDistribution::iid_equilibrium(0.01, 0)),
        no_equilibrium_error);
}

TEST_CASE("expected equity return reproduces the sample mean") {
    const double re = expected_equity_return(kBeta, kZeta, kRho, paper_dist());
    CHECK(re == Approx(1.069801075).epsilon(1e-8));
    CHECK(std::abs(re - 1.0698) < 1e-3);
    CHECK(expected_equity_return(1.0, 1.0, 0.0, GrowthDistribution::iid_equilibrium(0, 0)) ==
          Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equity return equals the price-dividend form") {
    std::mt19937 rng(203);
    for (int i = 0; i < 1000; ++i) {
        const Draw d = admissible_draw(rng);
        const auto dist = GrowthDistribution::iid_equilibrium(d.mu, d.sigma2);
        const double v = price_dividend_ratio(d.beta, d.zeta, d.rho, dist);
        const double direct = expected_equity_return(d.beta, d.zeta, d.rho, dist);
        const double via_v = (v + 1.0) / v * lognormal_power_moment(d.mu, d.sigma2, 1.0);
        CHECK(direct == Approx(via_v).epsilon(1e-12));
    }
}

TEST_CASE("risk-free rate reproduces the sample mean") {
    const double rf = risk_free_rate(kBeta, kXi, kRho, paper_dist());
    CHECK(rf == Approx(1.008000338).epsilon(1e-8));
    CHECK(std::abs(rf - 1.008) < 1e-3);
    CHECK(risk_free_rate(1.0, 1.0, 0.0, GrowthDistribution::iid_equilibrium(0, 0)) == 1.0);
    CHECK(risk_free_rate(0.99, 1.0, 0.0, GrowthDistribution::iid_equilibrium(0, 0)) ==
          Approx(1.0 / 0.99).epsilon(1e-12));
}

TEST_CASE("log and level return forms agree") {
    std::mt19937 rng(204);
    for (int i = 0; i < 1000; ++i) {
        const Draw d = admissible_draw(rng);
        const auto dist = GrowthDistribution::iid_equilibrium(d.mu, d.sigma2);
        const auto logs = log_return_equations(d.beta, {d.zeta, d.xi}, d.rho, dist);
        CHECK(std::exp(logs.ln_equity_return) ==
              Approx(expected_equity_return(d.beta, d.zeta, d.rho, dist)).epsilon(1e-12));
        CHECK(std::exp(logs.ln_risk_free) ==
              Approx(risk_free_rate(d.beta, d.xi, d.rho, dist)).epsilon(1e-12));
    }
}

TEST_CASE("premium equation is the difference of the return equations") {
    std::mt19937 rng(205);
    for (int i = 0; i < 1000; ++i) {
        const Draw d = admissible_draw(rng);
        const auto dist = GrowthDistribution::iid_equilibrium(d.mu, d.sigma2);
        const auto logs = log_return_equations(d.beta, {d.zeta, d.xi}, d.rho, dist);
        // the premium expression evaluated on its own
        const double eq_premium =
            std::log(d.xi) - std::log(d.zeta) + d.rho * dist.sigma2_x;
        CHECK(logs.log_premium == Approx(eq_premium).margin(1e-12));
    }
}

TEST_CASE("log premium trivial and calibrated values") {
    const auto neutral = log_return_equations(
        1.0, {1.0, 1.0}, 0.0, GrowthDistribution::iid_equilibrium(0.01, 0.001));
    CHECK(neutral.log_premium == 0.0);

    const auto paper = log_return_equations(kBeta, {kZeta, kXi}, kRho, paper_dist());
    CHECK(paper.log_premium == Approx(0.059504215).margin(1e-8));
}

TEST_CASE("sufficiency factors of one reduce to the standard model") {
    const double beta = 0.97, rho = 2.5, mu = 0.018, sigma2 = 0.0013;
    const auto dist = GrowthDistribution::iid_equilibrium(mu, sigma2);
    const auto logs = log_return_equations(beta, {1.0, 1.0}, rho, dist);
    CHECK(logs.ln_equity_return ==
          Approx(-std::log(beta) + rho * mu - 0.5 * rho * rho * sigma2 + rho * sigma2)
              .margin(1e-14));
    CHECK(logs.ln_risk_free ==
          Approx(-std::log(beta) + rho * mu - 0.5 * rho * rho * sigma2).margin(1e-14));
}

TEST_CASE("monotonicity in the sufficiency factors") {
    const auto dist = paper_dist();
    CHECK(risk_free_rate(kBeta, 1.02, kRho, dist) < risk_free_rate(kBeta, 1.01, kRho, dist));
    CHECK(risk_free_rate(0.99, kXi, kRho, dist) < risk_free_rate(0.98, kXi, kRho, dist));
    CHECK(expected_equity_return(kBeta, 0.97, kRho, dist) <
          expected_equity_return(kBeta, 0.96, kRho, dist));
}

TEST_CASE("pricing relation residual vanishes at the equilibrium price") {
    const auto dist = paper_dist();
    const double v = price_dividend_ratio(kBeta, kZeta, kRho, dist);
    const double y = 3.7;
    const EulerInputs eq{v * y, y, y};
    const double scale = eq.price * CrraUtility(kRho).deriv1(eq.consumption);
    CHECK(std::abs(euler_residual(eq, kBeta, kZeta, kRho, dist)) < 1e-10 * scale);

    const EulerInputs high{1.1 * v * y, y, y};
    CHECK(euler_residual(high, kBeta, kZeta, kRho, dist) > 0.0);
    const EulerInputs low{0.9 * v * y, y, y};
    CHECK(euler_residual(low, kBeta, kZeta, kRho, dist) < 0.0);
}

TEST_CASE("pricing relation residual with a zero sufficiency factor") {
    const auto dist = paper_dist();
    const EulerInputs in{2.0, 1.0, 1.0};
    CHECK(euler_residual(in, kBeta, 0.0, kRho, dist) ==
          in.price * CrraUtility(kRho).deriv1(in.consumption));
}

TEST_CASE("pricing relation expectation matches quadrature") {
    const double beta = 0.98, eta = 0.97, rho = 1.7, y = 2.0, c = 2.0;
    const auto dist = GrowthDistribution::iid_equilibrium(0.015, 0.002);
    const double v = price_dividend_ratio(beta, eta, rho, dist);
    const EulerInputs in{0.8 * v * y, y, c};

    const double rhs_quad =
        beta * eta *
        testutil::lognormal_expectation(dist.mu_x, dist.sigma2_x, [&](double x) {
            const double p_next = v * y * x;
            const double y_next = y * x;
            return (p_next + y_next) * std::pow(c * x, -rho);
        });
    const double lhs = in.price * CrraUtility(rho).deriv1(c);
    CHECK(euler_residual(in, beta, eta, rho, dist) ==
          Approx(lhs - rhs_quad).epsilon(1e-8));
}

TEST_CASE("solve_pricing bundles the closed forms consistently") {
    const auto sol = solve_pricing(kBeta, {kZeta, kXi}, kRho, paper_dist());
    CHECK(sol.price_dividend_ratio == Approx(19.652135168).epsilon(1e-8));
    CHECK(sol.expected_equity_return == Approx(1.069801075).epsilon(1e-8));
    CHECK(sol.risk_free_rate == Approx(1.008000338).epsilon(1e-8));
    CHECK(sol.log_premium ==
          Approx(std::log(sol.expected_equity_return) - std::log(sol.risk_free_rate))
              .margin(1e-15));
}

TEST_CASE("euler inputs validation and endowment bookkeeping") {
    CHECK_THROWS_AS(euler_residual({0.0, 1.0, 1.0}, 0.99, 1.0, 2.0, paper_dist()),
                    domain_error);
    CHECK_THROWS_AS(euler_residual({1.0, 1.0, 0.0}, 0.99, 1.0, 2.0, paper_dist()),
                    domain_error);
    const EulerInputs in{19.0, 1.0, 1.0, 1.0};
    CHECK(in.endowment() == Approx(20.0));
}
