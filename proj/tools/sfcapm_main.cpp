// Command-line front end: calibrate | price | premium | classify | simulate.
// Exit codes: 0 success, 1 input error, 2 numerical failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfcapm/cli.hpp"

namespace {

int emit(const sfcapm::Report& report, bool as_json) {
    if (as_json)
        std::cout << report.dump(2) << "\n";
    else
        sfcapm::render_text(report, std::cout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sufficiency-factor consumption-CAPM toolkit"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit the structured report instead of the text table");

    // calibrate
    sfcapm::CalibrateOptions cal;
    std::string cal_stats;
    double cal_beta = 0.0;
    std::vector<double> cal_guess;
    auto* calibrate = app.add_subcommand(
        "calibrate", "build and solve the three-equation system from a stats file");
    auto* cal_stats_opt =
        calibrate->add_option("stats", cal_stats, "stats file (key = value or JSON)");
    auto* cal_beta_opt = calibrate->add_option(
        "--beta", cal_beta, "override the discount factor from the stats file");
    calibrate->add_flag("--paper-constants", cal.paper_constants,
                        "use the published rounded coefficients instead of a stats file");
    calibrate
        ->add_option("--guess", cal_guess, "initial guess as three values: zeta xi rho")
        ->expected(3);
    calibrate->add_option("--manifold-samples", cal.manifold_samples,
                          "number of solution-manifold rows to print");

    // price
    sfcapm::PriceOptions price;
    auto* price_cmd = app.add_subcommand("price", "equilibrium pricing at a parameter point");
    price_cmd->add_option("--beta", price.beta, "discount factor");
    price_cmd->add_option("--zeta", price.zeta, "equity sufficiency factor");
    price_cmd->add_option("--xi", price.xi, "risk-free sufficiency factor");
    price_cmd->add_option("--rho", price.rho, "relative risk aversion");
    price_cmd->add_option("--mu", price.mu, "log-mean of growth");
    price_cmd->add_option("--sigma2", price.sigma2, "log-variance of growth");

    // premium
    sfcapm::PremiumOptions prem{};
    std::string prem_method;
    auto* prem_cmd = app.add_subcommand("premium", "risk premium for an uncertain wealth move");
    prem_cmd->add_option("--rho", prem.rho, "relative risk aversion")->required();
    prem_cmd->add_option("--ws", prem.w_s, "certain wealth")->required();
    prem_cmd->add_option("--wns", prem.w_ns, "uncertain wealth")->required();
    prem_cmd->add_option("--beta", prem.beta, "discount factor");
    prem_cmd->add_option("--eta", prem.eta, "sufficiency factor");
    auto* prem_method_opt = prem_cmd->add_option(
        "--method", prem_method, "exact, first_order, or eq27 (default: all three)");

    // classify
    sfcapm::ClassifyOptions cls{};
    auto* cls_cmd = app.add_subcommand("classify", "risk-behavior classification");
    cls_cmd->add_option("--rho", cls.rho, "relative risk aversion")->required();
    cls_cmd->add_option("--wt", cls.w_certain, "certain wealth")->required();
    cls_cmd->add_option("--wT", cls.w_uncertain, "uncertain wealth")->required();
    cls_cmd->add_option("--beta", cls.beta, "discount factor");
    cls_cmd->add_option("--eta", cls.eta, "sufficiency factor");
    cls_cmd->add_option("--tol", cls.tol, "neutrality tolerance");

    // simulate
    sfcapm::SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "seeded Monte Carlo of the exchange economy");
    sim_cmd->add_option("--periods", sim.periods, "number of periods");
    sim_cmd->add_option("--seed", sim.seed, "master seed");
    sim_cmd->add_option("--beta", sim.beta, "discount factor");
    sim_cmd->add_option("--zeta", sim.zeta, "equity sufficiency factor");
    sim_cmd->add_option("--xi", sim.xi, "risk-free sufficiency factor");
    sim_cmd->add_option("--rho", sim.rho, "relative risk aversion");
    sim_cmd->add_option("--mu", sim.mu, "log-mean of growth");
    sim_cmd->add_option("--sigma2", sim.sigma2, "log-variance of growth");
    sim_cmd->add_option("--threads", sim.threads, "worker threads (results are identical)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*calibrate) {
            if (*cal_stats_opt) cal.stats_path = cal_stats;
            if (*cal_beta_opt) cal.beta_override = cal_beta;
            if (cal_guess.size() == 3) cal.initial_guess = {cal_guess[0], cal_guess[1], cal_guess[2]};
            std::vector<std::string> warnings;
            const sfcapm::Report report = sfcapm::cmd_calibrate(cal, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            return emit(report, as_json);
        }
        if (*price_cmd) return emit(sfcapm::cmd_price(price), as_json);
        if (*prem_cmd) {
            if (*prem_method_opt) prem.method = prem_method;
            return emit(sfcapm::cmd_premium(prem), as_json);
        }
        if (*cls_cmd) return emit(sfcapm::cmd_classify(cls), as_json);
        if (*sim_cmd) return emit(sfcapm::cmd_simulate(sim), as_json);
    } catch (const sfcapm::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const sfcapm::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
