#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "sfcapm/crra.hpp"
#include "sfcapm/errors.hpp"

namespace sfcapm {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class RiskClass { risk_averse, risk_loving, risk_neutral };
enum class CurvePosition { below, above, coincides };
enum class Direction { upward, downward };
enum class PremiumMethod { exact, first_order, paper_eq27 };

inline const char* to_string(RiskClass c) {
    switch (c) {
        case RiskClass::risk_averse: return "RiskAverse";
        case RiskClass::risk_loving: return "RiskLoving";
        default: return "RiskNeutral";
    }
}

inline const char* to_string(CurvePosition p) {
    switch (p) {
        case CurvePosition::below: return "Below";
        case CurvePosition::above: return "Above";
        default: return "Coincides";
    }
}

inline const char* to_string(PremiumMethod m) {
    switch (m) {
        case PremiumMethod::exact: return "exact";
        case PremiumMethod::first_order: return "first_order";
        default: return "eq27";
    }
}

// Subjective discounting beta in (0,1] plus the sufficiency factor eta > 0
// scaling the utility of uncertain wealth.
struct Preferences {
    double beta = 0.99;
    double eta = 1.0;

    void validate() const {
        if (!(beta > 0.0 && beta <= 1.0))
            throw domain_error("Preferences: beta must be in (0,1], got " + std::to_string(beta));
        if (!(eta > 0.0) || !std::isfinite(eta))
            throw domain_error("Preferences: eta must be positive, got " + std::to_string(eta));
    }
};

// A certain wealth paired with the uncertain wealth it is expected to move to.
// direction is upward exactly when the uncertain value is at least the certain one.
struct WealthScenario {
    double w_certain;
    double w_uncertain;
    Direction direction;

    static WealthScenario make(double w_certain, double w_uncertain) {
        detail::check_wealth(w_certain, "WealthScenario");
        detail::check_wealth(w_uncertain, "WealthScenario");
        return {w_certain, w_uncertain,
                w_uncertain >= w_certain ? Direction::upward : Direction::downward};
    }

    void validate() const {
        detail::check_wealth(w_certain, "WealthScenario");
        detail::check_wealth(w_uncertain, "WealthScenario");
        const bool up = w_uncertain >= w_certain;
        if (up != (direction == Direction::upward))
            throw domain_error("WealthScenario: direction does not match the wealth ordering");
    }
};

// Two-outcome lottery around a baseline wealth. The gain variable is
// outcome - baseline, so low = 0 with probability t recovers the
// (1-t) w_f - w_s form of the expected gain.
struct Lottery {
    double low_outcome;
    double high_outcome;
    double prob_low;
    double baseline;

    void validate() const {
        if (!(prob_low >= 0.0 && prob_low <= 1.0))
            throw domain_error("Lottery: prob_low must be in [0,1], got " +
                               std::to_string(prob_low));
        if (!(low_outcome >= 0.0))
            throw domain_error("Lottery: low_outcome must be >= 0");
        detail::check_wealth(baseline, "Lottery");
        if (!std::isfinite(low_outcome) || !std::isfinite(high_outcome))
            throw domain_error("Lottery: outcomes must be finite");
    }
};

struct LotteryStats {
    double expected_gain;            // E(z)
    double variance;                 // var(z) about its mean
    double implied_uncertain_wealth; // w_i = baseline + E(z)
};

struct PremiumResult {
    double premium;              // pi, in wealth units
    double certainty_equivalent; // CE = w_certain - pi
    PremiumMethod method;
};

// Inputs of the Taylor-expansion formulas. They take utility evaluations,
// not a curve: feeding a CRRA curve into the rho expansion would make the
// equation implicit in rho. Exactly one of eta/delta is meaningful per
// operation; both can be carried.
struct ExpansionInputs {
    double w_s;           // certain wealth
    double expected_gain; // E(z), must be nonzero
    double pi;            // risk premium
    double beta;
    std::optional<double> eta;
    std::optional<double> delta; // constant utility offset
    double value_at_ws;          // u(w_s)
    double slope_at_ws;          // u'(w_s) > 0

    void validate() const {
        if (expected_gain == 0.0 || !std::isfinite(expected_gain))
            throw degenerate_error("ExpansionInputs: expected gain must be nonzero");
        if (!(slope_at_ws > 0.0))
            throw domain_error("ExpansionInputs: slope at w_s must be positive");
        if (!(beta > 0.0))
            throw domain_error("ExpansionInputs: beta must be positive");
    }
};

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

// Compares u(w_certain) against beta * eta * u(w_uncertain). Strictly greater
// marks a risk-averse investor, strictly smaller a risk-loving one; equality
// within tol * max(1, |u(w_certain)|) is risk-neutral. Exact equality is
// measure-zero in floating point, hence the band.
inline RiskClass classify_investor(const CrraUtility& curve, double w_certain,
                                   double w_uncertain, const Preferences& prefs,
                                   double tol = 1e-9) {
    prefs.validate();
    if (!(tol > 0.0)) throw domain_error("classify_investor: tol must be positive");
    const double lhs = curve.value(w_certain);
    const double rhs = prefs.beta * prefs.eta * curve.value(w_uncertain);
    const double band = tol * std::max(1.0, std::abs(lhs));
    if (std::abs(lhs - rhs) <= band) return RiskClass::risk_neutral;
    return lhs > rhs ? RiskClass::risk_averse : RiskClass::risk_loving;
}

inline RiskClass classify_investor(const CrraUtility& curve, const WealthScenario& scenario,
                                   const Preferences& prefs, double tol = 1e-9) {
    scenario.validate();
    return classify_investor(curve, scenario.w_certain, scenario.w_uncertain, prefs, tol);
}

// eta implied by the utility an investor adds to (or removes from) the base
// utility of the uncertain wealth: eta * u = u + allocated.
inline double sufficiency_factor_from_allocation(double base_utility, double allocated) {
    if (base_utility == 0.0)
        throw degenerate_error(
            "sufficiency_factor_from_allocation: base utility is zero, eta is undefined");
    return (base_utility + allocated) / base_utility;
}

// Where eta*u(w) sits relative to u(w), for every w > 0 at once. The verdict
// only depends on the signs of (eta - 1) and (1 - rho); rho = 1 is rejected
// because u changes sign there.
inline CurvePosition curve_relation(double eta, double rho) {
    if (!(eta > 0.0)) throw domain_error("curve_relation: eta must be positive");
    if (!(rho >= 0.0)) throw domain_error("curve_relation: rho must be >= 0");
    if (rho == 1.0)
        throw domain_error("curve_relation: rho = 1 is unsupported (utility changes sign)");
    if (eta == 1.0) return CurvePosition::coincides;
    const bool below = (eta < 1.0) == (rho < 1.0);
    return below ? CurvePosition::below : CurvePosition::above;
}

// ---------------------------------------------------------------------------
// Lotteries and premia
// ---------------------------------------------------------------------------

inline LotteryStats lottery_stats(const Lottery& lot) {
    lot.validate();
    const double t = lot.prob_low;
    const double mean_outcome = t * lot.low_outcome + (1.0 - t) * lot.high_outcome;
    const double expected_gain = mean_outcome - lot.baseline;
    const double spread = lot.high_outcome - lot.low_outcome;
    return {expected_gain, t * (1.0 - t) * spread * spread, lot.baseline + expected_gain};
}

// Exact premium: CE solves u(CE) = beta * eta * u(w_ns), pi = w_s - CE.
// Downward moves (w_ns < w_s) go through the identical computation.
inline PremiumResult exact_risk_premium(const CrraUtility& curve, double w_s, double w_ns,
                                        const Preferences& prefs) {
    prefs.validate();
    detail::check_wealth(w_s, "exact_risk_premium");
    const double target = prefs.beta * prefs.eta * curve.value(w_ns);
    double ce;
    try {
        ce = curve.inverse(target);
    } catch (const domain_error&) {
        throw no_solution_error("exact_risk_premium: beta*eta*u(w_ns) = " +
                                std::to_string(target) +
                                " lies outside the range of the utility curve");
    }
    return {w_s - ce, ce, PremiumMethod::exact};
}

// First-order premium from the expansion of u(w_s - pi) around w_s:
// pi = (u(w_s) - beta*eta*u(w_ns)) / u'(w_s).
inline PremiumResult first_order_risk_premium(double w_s, double u_ws, double slope_ws,
                                              double u_wns, const Preferences& prefs) {
    prefs.validate();
    if (!(slope_ws > 0.0))
        throw domain_error("first_order_risk_premium: slope at w_s must be positive");
    const double pi = (u_ws - prefs.beta * prefs.eta * u_wns) / slope_ws;
    return {pi, w_s - pi, PremiumMethod::first_order};
}

// The premium relation obtained by multiplying the first-order form by
// -u''(w_s). As printed it carries a coefficient named rho that is
// dimensionally consistent only when read as absolute risk aversion
// alpha = -u''/u'; under that reading alpha / u''(w_s) = -1 / u'(w_s) and the
// result coincides with the first-order premium identically. literal_rho
// applies relative risk aversion instead, which is off by a factor w_s; it is
// exposed for side-by-side comparison, not for use.
inline PremiumResult paper_premium_eq27(const CrraUtility& curve, double w_s, double u_wns,
                                        const Preferences& prefs, bool literal_rho = false) {
    prefs.validate();
    const double curvature = curve.deriv2(w_s);
    if (curvature == 0.0)
        throw degenerate_error("paper_premium_eq27: u''(w_s) = 0 (linear utility)");
    const double coeff = literal_rho ? curve.relative_risk_aversion(w_s)
                                     : curve.absolute_risk_aversion(w_s);
    const double pi =
        coeff * (prefs.eta * prefs.beta * u_wns - curve.value(w_s)) / curvature;
    return {pi, w_s - pi, PremiumMethod::paper_eq27};
}

// ---------------------------------------------------------------------------
// Expansion formulas
// ---------------------------------------------------------------------------

// Absolute risk aversion implied by the expansion with the constant utility
// offset delta:
//   alpha = 2 pi / (beta Ez^2) + 2 / Ez - 2 delta / (beta u' Ez^2)
//           + 2 u (beta - 1) / (beta u' Ez^2).
inline double alpha_expansion_delta(const ExpansionInputs& in) {
    in.validate();
    if (!in.delta)
        throw domain_error("alpha_expansion_delta: delta is required");
    const double ez2 = in.expected_gain * in.expected_gain;
    const double denom = in.beta * in.slope_at_ws * ez2;
    return 2.0 * in.pi / (in.beta * ez2) + 2.0 / in.expected_gain -
           2.0 * (*in.delta) / denom + 2.0 * in.value_at_ws * (in.beta - 1.0) / denom;
}

// Same expansion with the multiplicative sufficiency factor eta:
//   alpha = 2 pi / (beta eta Ez^2) + 2 / Ez
//           + (beta eta - 1) 2 u / (beta eta u' Ez^2).
inline double alpha_expansion_eta(const ExpansionInputs& in) {
    in.validate();
    if (!in.eta)
        throw domain_error("alpha_expansion_eta: eta is required");
    if (!(*in.eta > 0.0))
        throw domain_error("alpha_expansion_eta: eta must be positive");
    const double ez2 = in.expected_gain * in.expected_gain;
    const double be = in.beta * (*in.eta);
    return 2.0 * in.pi / (be * ez2) + 2.0 / in.expected_gain +
           (be - 1.0) * 2.0 * in.value_at_ws / (be * in.slope_at_ws * ez2);
}

// The relative-risk-aversion forms are the alpha forms scaled by w_s.
inline double rho_expansion_delta(const ExpansionInputs& in) {
    return in.w_s * alpha_expansion_delta(in);
}

inline double rho_expansion_eta(const ExpansionInputs& in) {
    return in.w_s * alpha_expansion_eta(in);
}

// Exact algebraic inverse of rho_expansion_eta in eta:
//   eta = (2 pi w_s u' - 2 w_s u)
//         / (rho beta u' Ez^2 - 2 w_s Ez beta u' - 2 w_s beta u).
inline double eta_from_expansion(double w_s, double expected_gain, double pi, double beta,
                                 double rho, double u_ws, double slope_ws) {
    if (expected_gain == 0.0)
        throw degenerate_error("eta_from_expansion: expected gain must be nonzero");
    const double numer = 2.0 * pi * w_s * slope_ws - 2.0 * w_s * u_ws;
    const double denom = rho * beta * slope_ws * expected_gain * expected_gain -
                         2.0 * w_s * expected_gain * beta * slope_ws -
                         2.0 * w_s * beta * u_ws;
    if (denom == 0.0)
        throw degenerate_error("eta_from_expansion: degenerate configuration, denominator is zero");
    return numer / denom;
}

// Classical fair-gamble relation rho = 2 pi w_s / var(z).
inline double fair_gamble_rho(double pi, double w_s, double variance) {
    if (!(variance > 0.0))
        throw domain_error("fair_gamble_rho: variance must be positive");
    return 2.0 * pi * w_s / variance;
}

// Offset delta that makes the additive premium relation coincide with the
// multiplicative one: delta = beta (1 - eta) u(w_i).
inline double delta_from_eta(double beta, double eta, double u_wi) {
    return beta * (1.0 - eta) * u_wi;
}

} // namespace sfcapm
