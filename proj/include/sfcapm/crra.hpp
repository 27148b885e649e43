#pragma once

#include <cmath>
#include <string>

#include "sfcapm/errors.hpp"

namespace sfcapm {

namespace detail {

inline void check_wealth(double w, const char* who) {
    if (!(w > 0.0) || !std::isfinite(w))
        throw domain_error(std::string(who) + ": wealth must be positive and finite, got " +
                           std::to_string(w));
}

} // namespace detail

// Constant-relative-risk-aversion utility u(w) = w^{1-rho} / (1-rho).
//
// rho = 1 is the logarithmic limit and maps to u(w) = ln(w); it is kept as an
// explicit special case because the sign of u is not constant there, which
// several risk predicates rely on. Powers are evaluated in log/exp space so
// w^{1-rho} does not overflow before the division by (1-rho) can tame it.
class CrraUtility {
public:
    explicit CrraUtility(double rho) : rho_(rho) {
        if (!(rho >= 0.0) || !std::isfinite(rho))
            throw domain_error("CrraUtility: rho must be >= 0 and finite, got " +
                               std::to_string(rho));
    }

    double rho() const { return rho_; }
    bool is_log() const { return rho_ == 1.0; }

    // u(w). Negative for rho > 1, positive for rho < 1, either sign for rho = 1.
    double value(double w) const {
        detail::check_wealth(w, "CrraUtility::value");
        const double lw = std::log(w);
        if (is_log()) return lw;
        const double one_m_rho = 1.0 - rho_;
        const double sign = one_m_rho > 0.0 ? 1.0 : -1.0;
        return sign * std::exp(one_m_rho * lw - std::log(std::abs(one_m_rho)));
    }

    // u'(w) = w^{-rho} > 0.
    double deriv1(double w) const {
        detail::check_wealth(w, "CrraUtility::deriv1");
        return std::exp(-rho_ * std::log(w));
    }

    // u''(w) = -rho * w^{-rho-1} <= 0.
    double deriv2(double w) const {
        detail::check_wealth(w, "CrraUtility::deriv2");
        if (rho_ == 0.0) return 0.0;
        return -rho_ * std::exp(-(rho_ + 1.0) * std::log(w));
    }

    // w such that value(w) = v. Requires v in the range of the curve:
    // (1-rho)v > 0 for rho != 1, any real for rho = 1. Evaluated as
    // exp((ln|1-rho| + ln|v|) / (1-rho)) so the product (1-rho)v cannot
    // overflow first.
    double inverse(double v) const {
        if (!std::isfinite(v))
            throw domain_error("CrraUtility::inverse: utility must be finite");
        if (is_log()) return std::exp(v);
        const double one_m_rho = 1.0 - rho_;
        if (v == 0.0 || (v > 0.0) != (one_m_rho > 0.0))
            throw domain_error("CrraUtility::inverse: utility " + std::to_string(v) +
                               " is outside the range of the curve with rho = " +
                               std::to_string(rho_));
        const double log_t = std::log(std::abs(one_m_rho)) + std::log(std::abs(v));
        const double w = std::exp(log_t / one_m_rho);
        if (w == 0.0 || !std::isfinite(w))
            throw domain_error("CrraUtility::inverse: wealth for utility " +
                               std::to_string(v) + " is outside the representable range");
        return w;
    }

    // Arrow-Pratt absolute risk aversion -u''(w)/u'(w) = rho / w.
    double absolute_risk_aversion(double w) const {
        detail::check_wealth(w, "CrraUtility::absolute_risk_aversion");
        return rho_ / w;
    }

    // Relative risk aversion -u''(w) w / u'(w); constant by construction.
    double relative_risk_aversion(double w) const {
        detail::check_wealth(w, "CrraUtility::relative_risk_aversion");
        return rho_;
    }

private:
    double rho_;
};

} // namespace sfcapm
