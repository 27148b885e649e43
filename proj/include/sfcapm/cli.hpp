#pragma once

#include <array>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "sfcapm/calibration.hpp"
#include "sfcapm/montecarlo.hpp"
#include "sfcapm/pricing.hpp"
#include "sfcapm/risk.hpp"
#include "sfcapm/stats_io.hpp"
#include "sfcapm/version.hpp"

namespace sfcapm {

// Reports keep insertion order so the text rendering reads top-down; the
// structured form re-parses to the same values either way.
using Report = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Command options
// ---------------------------------------------------------------------------

struct CalibrateOptions {
    std::optional<std::string> stats_path;
    std::optional<double> beta_override;
    bool paper_constants = false;
    std::array<double, 3> initial_guess = {1.0, 1.0, 2.0};
    int manifold_samples = 11;
};

struct PriceOptions {
    double beta = 0.99;
    double zeta = 1.0;
    double xi = 1.0;
    double rho = 1.033526;
    double mu = 0.0;
    double sigma2 = 0.0;
};

struct PremiumOptions {
    double rho;
    double w_s;
    double w_ns;
    double beta = 0.99;
    double eta = 1.0;
    std::optional<std::string> method; // exact | first_order | eq27; all three if absent
};

struct ClassifyOptions {
    double rho;
    double w_certain;
    double w_uncertain;
    double beta = 0.99;
    double eta = 1.0;
    double tol = 1e-9;
};

struct SimulateOptions {
    std::uint64_t periods = 1000000;
    std::uint64_t seed = 1;
    double beta = 0.99;
    double zeta = 1.0;
    double xi = 1.0;
    double rho = 1.033526;
    double mu = 0.0;
    double sigma2 = 0.0;
    int threads = 1;
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

namespace cli_detail {

inline Report report_header(const char* command) {
    Report r;
    r["command"] = command;
    r["version"] = kVersion;
    return r;
}

} // namespace cli_detail

inline Report cmd_calibrate(const CalibrateOptions& opt,
                            std::vector<std::string>* warnings = nullptr) {
    Report report = cli_detail::report_header("calibrate");

    CalibrationSystem system;
    Report inputs;
    if (opt.paper_constants) {
        system = CalibrationSystem::paper_printed();
        inputs["source"] = "paper-constants";
    } else {
        if (!opt.stats_path)
            throw parse_error("calibrate: provide a stats file or --paper-constants");
        StatsFile file = parse_stats_file(*opt.stats_path);
        if (warnings)
            for (const auto& key : file.unknown_keys)
                warnings->push_back("ignoring unknown stats field '" + key + "'");
        if (opt.beta_override) file.stats.beta = *opt.beta_override;
        file.stats.validate();
        inputs["source"] = *opt.stats_path;
        inputs["statistics"] = {{"mean_equity_return", file.stats.mean_equity_return},
                                {"mean_risk_free_rate", file.stats.mean_risk_free},
                                {"mean_consumption_growth", file.stats.mean_growth},
                                {"sd_consumption_growth", file.stats.sd_growth},
                                {"beta", file.stats.beta}};
        system = build_system(file.stats);
    }
    inputs["initial_guess"] = {{"zeta", opt.initial_guess[0]},
                               {"xi", opt.initial_guess[1]},
                               {"rho", opt.initial_guess[2]}};
    report["inputs"] = inputs;

    report["system"] = {{"mu", system.mu},
                        {"sigma2", system.sigma2},
                        {"rhs1", system.rhs1},
                        {"rhs2", system.rhs2},
                        {"rhs3", system.rhs3}};

    const CalibrationResult result = solve(system, opt.initial_guess);
    report["solution"] = {{"zeta", result.zeta},
                          {"xi", result.xi},
                          {"rho", result.rho},
                          {"sse", result.sse},
                          {"iterations", result.iterations},
                          {"rank_deficient", result.rank_deficient}};

    const RankDiagnosis rank = jacobian_rank(system, result.rho);
    const auto paper_res = residuals(system, 0.961745, 1.019392, 1.033526);
    const double paper_max = std::max({std::abs(paper_res[0]), std::abs(paper_res[1]),
                                       std::abs(paper_res[2])});
    report["diagnostics"] = {
        {"consistency_defect", result.consistency_defect},
        {"jacobian_rank", rank.rank},
        {"singular_values", {rank.singular_values[0], rank.singular_values[1],
                             rank.singular_values[2]}},
        {"baseline_puzzle_rho", baseline_puzzle_rho(system)},
        {"paper_point",
         {{"zeta", 0.961745},
          {"xi", 1.019392},
          {"rho", 1.033526},
          {"max_abs_residual", paper_max}}}};

    // the solution is one point of a one-parameter family; show the family
    Report manifold = Report::array();
    const int samples = std::max(2, opt.manifold_samples);
    for (int i = 0; i < samples; ++i) {
        const double rho = 50.0 * static_cast<double>(i) / (samples - 1);
        const SufficiencyFactors point = manifold_point(system, rho);
        manifold.push_back({{"rho", rho}, {"zeta", point.zeta}, {"xi", point.xi}});
    }
    report["manifold"] = manifold;
    return report;
}

inline Report cmd_price(const PriceOptions& opt) {
    Report report = cli_detail::report_header("price");
    report["inputs"] = {{"beta", opt.beta}, {"zeta", opt.zeta}, {"xi", opt.xi},
                        {"rho", opt.rho},   {"mu", opt.mu},     {"sigma2", opt.sigma2}};
    const GrowthDistribution dist = GrowthDistribution::iid_equilibrium(opt.mu, opt.sigma2);

    // the returns stay finite at the existence boundary where the price
    // itself diverges, so the ratio is reported as null exactly there
    const double m =
        opt.beta * opt.zeta * lognormal_power_moment(opt.mu, opt.sigma2, 1.0 - opt.rho);
    Report ratio;
    if (m < 1.0)
        ratio = price_dividend_ratio(opt.beta, opt.zeta, opt.rho, dist);
    else if (m == 1.0)
        ratio = nullptr;
    else
        throw no_equilibrium_error("price: beta*zeta*E(x^{1-rho}) = " + std::to_string(m) +
                                   " > 1, the equity price diverges");

    const double re = expected_equity_return(opt.beta, opt.zeta, opt.rho, dist);
    const double rf = risk_free_rate(opt.beta, opt.xi, opt.rho, dist);
    report["outputs"] = {{"price_dividend_ratio", ratio},
                         {"expected_equity_return", re},
                         {"risk_free_rate", rf},
                         {"log_premium", std::log(re) - std::log(rf)},
                         {"level_premium", re - rf}};
    return report;
}

inline Report cmd_premium(const PremiumOptions& opt) {
    Report report = cli_detail::report_header("premium");
    report["inputs"] = {{"rho", opt.rho}, {"w_s", opt.w_s}, {"w_ns", opt.w_ns},
                        {"beta", opt.beta}, {"eta", opt.eta}};
    const CrraUtility curve(opt.rho);
    const Preferences prefs{opt.beta, opt.eta};

    auto emit = [&](const PremiumResult& r) {
        return Report{{"premium", r.premium},
                      {"certainty_equivalent", r.certainty_equivalent},
                      {"method", to_string(r.method)}};
    };
    auto compute = [&](const std::string& name) {
        if (name == "exact") return exact_risk_premium(curve, opt.w_s, opt.w_ns, prefs);
        if (name == "first_order")
            return first_order_risk_premium(opt.w_s, curve.value(opt.w_s),
                                            curve.deriv1(opt.w_s), curve.value(opt.w_ns),
                                            prefs);
        if (name == "eq27")
            return paper_premium_eq27(curve, opt.w_s, curve.value(opt.w_ns), prefs);
        throw parse_error("premium: unknown method '" + name +
                          "' (expected exact, first_order, or eq27)");
    };

    if (opt.method) {
        report["outputs"] = emit(compute(*opt.method));
    } else {
        const PremiumResult exact = compute("exact");
        const PremiumResult first = compute("first_order");
        const PremiumResult eq27 = compute("eq27");
        report["outputs"] = {{"exact", emit(exact)},
                             {"first_order", emit(first)},
                             {"eq27", emit(eq27)},
                             {"first_order_minus_exact", first.premium - exact.premium}};
    }
    return report;
}

inline Report cmd_classify(const ClassifyOptions& opt) {
    Report report = cli_detail::report_header("classify");
    report["inputs"] = {{"rho", opt.rho},   {"w_certain", opt.w_certain},
                        {"w_uncertain", opt.w_uncertain}, {"beta", opt.beta},
                        {"eta", opt.eta},   {"tol", opt.tol}};
    const CrraUtility curve(opt.rho);
    const Preferences prefs{opt.beta, opt.eta};
    const RiskClass verdict =
        classify_investor(curve, opt.w_certain, opt.w_uncertain, prefs, opt.tol);
    report["outputs"] = {
        {"classification", to_string(verdict)},
        {"certain_utility", curve.value(opt.w_certain)},
        {"discounted_uncertain_utility", opt.beta * opt.eta * curve.value(opt.w_uncertain)}};
    return report;
}

inline Report cmd_simulate(const SimulateOptions& opt) {
    Report report = cli_detail::report_header("simulate");
    report["inputs"] = {{"periods", opt.periods}, {"seed", opt.seed},
                        {"beta", opt.beta},       {"zeta", opt.zeta},
                        {"xi", opt.xi},           {"rho", opt.rho},
                        {"mu", opt.mu},           {"sigma2", opt.sigma2},
                        {"threads", opt.threads}};
    const SimulationConfig config{opt.periods,
                                  opt.seed,
                                  opt.beta,
                                  opt.zeta,
                                  opt.xi,
                                  opt.rho,
                                  GrowthDistribution::iid_equilibrium(opt.mu, opt.sigma2),
                                  opt.threads};
    const SimulationReport sim = simulate(config);
    report["outputs"] = {{"sample_mean_equity_return", sim.sample_mean_equity_return},
                         {"mean_std_error", sim.mean_std_error},
                         {"sample_euler_residual", sim.sample_euler_residual},
                         {"euler_std_error", sim.euler_std_error},
                         {"closed_form_equity_return", sim.closed_form_equity_return},
                         {"closed_form_risk_free", sim.closed_form_risk_free},
                         {"closed_form_price_dividend", sim.closed_form_price_dividend}};
    report["generator"] = sim.generator;
    report["seed"] = sim.seed;
    return report;
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

namespace cli_detail {

inline std::string format_value(const Report& v) {
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

inline void render_entry(std::ostream& os, const std::string& key, const Report& value,
                         int indent) {
    const std::string pad(indent, ' ');
    if (value.is_object()) {
        os << pad << key << ":\n";
        for (const auto& [k, v] : value.items()) render_entry(os, k, v, indent + 2);
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
        os << pad << key << ":\n";
        for (const auto& row : value) {
            os << pad << " ";
            for (const auto& [k, v] : row.items()) os << " " << k << "=" << format_value(v);
            os << "\n";
        }
    } else {
        os << pad << key << " = " << format_value(value) << "\n";
    }
}

} // namespace cli_detail

// Human-readable rendering of a report; all floats carry 12 significant
// digits so the degeneracy diagnostics stay visible.
inline void render_text(const Report& report, std::ostream& os) {
    os << "sfcapm " << report.value("command", "?") << " (version "
       << report.value("version", "?") << ")\n";
    for (const auto& [key, value] : report.items()) {
        if (key == "command" || key == "version") continue;
        cli_detail::render_entry(os, key, value, 0);
    }
}

} // namespace sfcapm
