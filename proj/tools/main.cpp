#include <exception>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "mlqe/cli.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kFit = 4 };

void add_data_options(CLI::App* cmd, mlqe::CliArgs& a) {
    cmd->add_option("--data", a.data_path, "Input file of positive observations")->required();
    cmd->add_option("--format", a.format, "lines | csv:COLUMN");
    cmd->add_option("--contaminate", a.contaminate, "none | inliers | outliers | both");
    cmd->add_option("--inlier-range", a.inlier_range, "A,B,COUNT (default min+0.5,max-0.5,10)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weibull fitting by maximum likelihood and maximum log_q likelihood"};
    app.require_subcommand(1);
    mlqe::CliArgs a;

    auto* fit = app.add_subcommand("fit", "Fit one data set by MLE (default) or MLqE");
    add_data_options(fit, a);
    fit->add_flag("--mle", a.mle, "Fit by maximum likelihood");
    fit->add_option("--q", a.q, "Fit by maximum log_q likelihood with this q");
    fit->add_option("--seed", a.seed, "Random seed");
    fit->add_option("--out", a.out_path, "Write the JSON report here instead of stdout");
    fit->add_option("--plot-data", a.plot_data_path, "Write CDF and histogram plot data as CSV");
    fit->add_option("--ga", a.ga, "GA overrides KEY=VAL,...");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo contamination study");
    sim->add_option("--design", a.design_path, "Design file")->required();
    sim->add_option("--reps", a.reps, "Replications");
    sim->add_option("--seed", a.seed, "Base seed");
    sim->add_flag("--mle", a.mle, "Only run MLE");
    sim->add_option("--q", a.q, "Run MLE and MLqE with this q");
    sim->add_option("--q-grid", a.q_grid, "LO:HI:STEP grid search over q");
    sim->add_option("--out", a.out_path, "Write the CSV here instead of stdout");
    sim->add_option("--ga", a.ga, "GA overrides KEY=VAL,...");
    sim->add_option("--threads", a.threads, "Worker threads (0 = all cores)");

    auto* sel = app.add_subcommand("select-q", "Choose q by the largest KS p-value");
    add_data_options(sel, a);
    sel->add_option("--q-grid", a.q_grid, "LO:HI:STEP (default 0.60:0.98 and 1.02:1.15 by 0.01)");
    sel->add_flag("--mle", a.mle, "Not allowed")->group("");
    sel->add_option("--q", a.q, "Not allowed")->group("");
    sel->add_option("--seed", a.seed, "Random seed");
    sel->add_option("--out", a.out_path, "Write the CSV here; the report then goes to stdout");
    sel->add_option("--plot-data", a.plot_data_path, "Write CDF and histogram plot data as CSV");
    sel->add_option("--ga", a.ga, "GA overrides KEY=VAL,...");

    auto* inj = app.add_subcommand("inject", "Append inliers and/or outliers to a data set");
    add_data_options(inj, a);
    inj->add_option("--seed", a.seed, "Random seed for inliers");
    inj->add_option("--out", a.out_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (fit->parsed()) mlqe::run_fit(a, std::cout, std::cerr);
        else if (sim->parsed()) mlqe::run_simulate(a, std::cout, std::cerr);
        else if (sel->parsed()) mlqe::run_select_q(a, std::cout, std::cerr);
        else if (inj->parsed()) mlqe::run_inject(a, std::cout, std::cerr);
    } catch (const mlqe::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const mlqe::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "fit failure: " << e.what() << '\n';
        return kFit;
    }
    return kOk;
}
