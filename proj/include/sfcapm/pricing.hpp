#pragma once

#include <cmath>
#include <string>

#include "sfcapm/crra.hpp"
#include "sfcapm/errors.hpp"

namespace sfcapm {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Log-moments of the i.i.d. lognormal growth processes. In the exchange
// equilibrium consumption and dividend growth coincide (x = z), which pins
// sigma_xz = sigma2_x and copies the x moments onto z; iid_equilibrium builds
// that configuration directly.
struct GrowthDistribution {
    double mu_x;
    double sigma2_x;
    double sigma_xz;
    double mu_z;
    double sigma2_z;

    static GrowthDistribution iid_equilibrium(double mu, double sigma2) {
        if (!(sigma2 >= 0.0))
            throw domain_error("GrowthDistribution: sigma2 must be >= 0, got " +
                               std::to_string(sigma2));
        return {mu, sigma2, sigma2, mu, sigma2};
    }

    void validate() const {
        if (!(sigma2_x >= 0.0) || !(sigma2_z >= 0.0))
            throw domain_error("GrowthDistribution: variances must be >= 0");
        if (!std::isfinite(mu_x) || !std::isfinite(mu_z) || !std::isfinite(sigma_xz))
            throw domain_error("GrowthDistribution: moments must be finite");
    }
};

// Per-asset sufficiency factors: zeta for equity investors, xi for the
// risk-free side.
struct SufficiencyFactors {
    double zeta;
    double xi;

    void validate() const {
        if (!(zeta > 0.0) || !(xi > 0.0))
            throw domain_error("SufficiencyFactors: zeta and xi must be positive");
    }
};

struct PricingSolution {
    double price_dividend_ratio;   // v, p_t = v y_t
    double expected_equity_return; // E(R_e)
    double risk_free_rate;         // R_f
    double log_premium;            // ln E(R_e) - ln R_f
};

struct LogReturns {
    double ln_equity_return;
    double ln_risk_free;
    double log_premium;
};

// State entering the pricing relationship at time t. The time-t+1 quantities
// (consumption growth, next-period price and dividend) are integrated out in
// closed form under the lognormal law, so only the time-t side is carried.
// Endowments follow from the budget c_t = e_t - p_t * theta.
struct EulerInputs {
    double price;       // p_t
    double dividend;    // y_t
    double consumption; // c_t; the exchange equilibrium sets c_t = y_t
    double holdings = 1.0;

    double endowment() const { return consumption + price * holdings; }

    void validate() const {
        if (!(price > 0.0)) throw domain_error("EulerInputs: price must be positive");
        if (!(dividend >= 0.0)) throw domain_error("EulerInputs: dividend must be >= 0");
        if (!(consumption > 0.0))
            throw domain_error("EulerInputs: consumption must be positive");
    }
};

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

struct LogMoments {
    double mu;
    double sigma2;
};

// Exact lognormal moment matching: the log-variance is
// ln(1 + (sd/mean)^2) and the log-mean is ln(mean) - sigma2/2, so that
// exp(mu + sigma2/2) reproduces the arithmetic mean. Matching on raw level
// moments (sd^2 directly) would not.
inline LogMoments log_moments_from_arithmetic(double mean, double sd) {
    if (!(mean > 0.0))
        throw domain_error("log_moments_from_arithmetic: mean must be positive");
    if (!(sd >= 0.0))
        throw domain_error("log_moments_from_arithmetic: sd must be >= 0");
    const double ratio = sd / mean;
    const double sigma2 = std::log1p(ratio * ratio);
    return {std::log(mean) - 0.5 * sigma2, sigma2};
}

// E(x^a) for ln x ~ N(mu, sigma2): exp(a mu + a^2 sigma2 / 2).
inline double lognormal_power_moment(double mu, double sigma2, double a) {
    if (!(sigma2 >= 0.0))
        throw domain_error("lognormal_power_moment: sigma2 must be >= 0");
    return std::exp(a * mu + 0.5 * a * a * sigma2);
}

// ---------------------------------------------------------------------------
// Equilibrium pricing
// ---------------------------------------------------------------------------

namespace detail {

inline double discounted_growth_moment(double beta, double zeta, double rho,
                                       const GrowthDistribution& dist) {
    dist.validate();
    if (!(beta > 0.0)) throw domain_error("pricing: beta must be positive");
    if (!(zeta > 0.0)) throw domain_error("pricing: zeta must be positive");
    return beta * zeta * lognormal_power_moment(dist.mu_x, dist.sigma2_x, 1.0 - rho);
}

} // namespace detail

// Constant price-dividend ratio v = m / (1 - m) with
// m = beta zeta E(x^{1-rho}). A finite positive price requires m < 1; the
// geometric sum behind the formula diverges otherwise.
inline double price_dividend_ratio(double beta, double zeta, double rho,
                                   const GrowthDistribution& dist) {
    const double m = detail::discounted_growth_moment(beta, zeta, rho, dist);
    if (!(m < 1.0))
        throw no_equilibrium_error(
            "price_dividend_ratio: beta*zeta*E(x^{1-rho}) = " + std::to_string(m) +
            " >= 1, the equity price diverges");
    return m / (1.0 - m);
}

// E(R_e) = E(x) / (beta zeta E(x^{1-rho})); equal to ((v+1)/v) E(x) whenever
// the price exists. The return itself stays finite at the existence boundary
// beta zeta E(x^{1-rho}) = 1 (where the price diverges), so no existence
// condition is imposed here.
inline double expected_equity_return(double beta, double zeta, double rho,
                                     const GrowthDistribution& dist) {
    const double m = detail::discounted_growth_moment(beta, zeta, rho, dist);
    return lognormal_power_moment(dist.mu_x, dist.sigma2_x, 1.0) / m;
}

// R_f = 1 / (beta xi E(x^{-rho})).
inline double risk_free_rate(double beta, double xi, double rho,
                             const GrowthDistribution& dist) {
    dist.validate();
    if (!(beta > 0.0)) throw domain_error("risk_free_rate: beta must be positive");
    if (!(xi > 0.0)) throw domain_error("risk_free_rate: xi must be positive");
    return 1.0 / (beta * xi * lognormal_power_moment(dist.mu_x, dist.sigma2_x, -rho));
}

// The three log-return expressions:
//   ln E(R_e)          = -ln beta - ln zeta + rho mu_x - rho^2 sigma2_x / 2 + rho sigma_xz
//   ln R_f             = -ln beta - ln xi   + rho mu_x - rho^2 sigma2_x / 2
//   ln E(R_e) - ln R_f = ln xi - ln zeta + rho sigma2_x
// Under x = z (sigma_xz = sigma2_x) the third is identically the difference of
// the first two; that dependency is what degenerates the calibration system.
inline LogReturns log_return_equations(double beta, const SufficiencyFactors& factors,
                                       double rho, const GrowthDistribution& dist) {
    dist.validate();
    factors.validate();
    if (!(beta > 0.0)) throw domain_error("log_return_equations: beta must be positive");
    const double common = rho * dist.mu_x - 0.5 * rho * rho * dist.sigma2_x;
    const double ln_re = -std::log(beta) - std::log(factors.zeta) + common +
                         rho * dist.sigma_xz;
    const double ln_rf = -std::log(beta) - std::log(factors.xi) + common;
    return {ln_re, ln_rf, ln_re - ln_rf};
}

// All four pricing outputs at one parameter point.
inline PricingSolution solve_pricing(double beta, const SufficiencyFactors& factors,
                                     double rho, const GrowthDistribution& dist) {
    const double v = price_dividend_ratio(beta, factors.zeta, rho, dist);
    const double re = expected_equity_return(beta, factors.zeta, rho, dist);
    const double rf = risk_free_rate(beta, factors.xi, rho, dist);
    return {v, re, rf, std::log(re) - std::log(rf)};
}

// Residual of the pricing relationship
//   p_t u'(c_t) - beta eta E[(p_{t+1} + y_{t+1}) u'(c_{t+1})]
// with the expectation in closed form: next-period prices follow the
// equilibrium ratio p_{t+1} = v y_{t+1}, dividends and consumption grow by the
// same lognormal draw, so the right-hand side is
// beta eta (v+1) y_t c_t^{-rho} E(x^{1-rho}). Zero exactly at p_t = v y_t.
inline double euler_residual(const EulerInputs& inputs, double beta, double eta, double rho,
                             const GrowthDistribution& dist) {
    inputs.validate();
    dist.validate();
    if (!(beta > 0.0)) throw domain_error("euler_residual: beta must be positive");
    if (!(eta >= 0.0)) throw domain_error("euler_residual: eta must be >= 0");
    const CrraUtility curve(rho);
    const double lhs = inputs.price * curve.deriv1(inputs.consumption);
    if (eta == 0.0) return lhs;
    const double v = price_dividend_ratio(beta, eta, rho, dist);
    const double growth_moment = lognormal_power_moment(dist.mu_x, dist.sigma2_x, 1.0 - rho);
    const double rhs = beta * eta * (v + 1.0) * inputs.dividend *
                       curve.deriv1(inputs.consumption) * growth_moment;
    return lhs - rhs;
}

} // namespace sfcapm
