// pfaudit: audit binary decisions for principal fairness.
//
//   pfaudit simulate --output-dir out --seed 7 [--n 5000 --m 100 --theta-d -1
//                     --decision-probs p00,p01,p10,p11,p20,p21,p30,p31]
//   pfaudit fit      --input out/data.csv --output-dir out --seed 7
//                     [--prior-std 1 --lr 0.01 --steps 3000 --mc-samples 8]
//   pfaudit assess   --input out/data.csv --output-dir out --seed 7
//                     [--draws 100 --format text|csv]
//   pfaudit pipeline --output-dir out --seed 7 [all of the above]

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfaudit/cli.hpp"

namespace {

pfaudit::DecisionProbTable parse_decision_probs(const std::vector<double>& values) {
    if (values.size() != 8)
        throw CLI::ValidationError("--decision-probs",
                                   "expected 8 comma-separated values in stratum-major order");
    pfaudit::DecisionProbTable table{};
    for (std::size_t h = 0; h < 4; ++h)
        for (std::size_t a = 0; a < 2; ++a) table[h][a] = values[2 * h + a];
    return table;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"principal fairness audit engine"};
    app.require_subcommand(1);

    pfaudit::RunConfig cfg;
    std::vector<double> decision_probs;
    std::string format = "text";

    auto add_common = [&](CLI::App* sub, bool needs_input, bool needs_seed) {
        sub->add_option("--output-dir", cfg.output_dir, "directory for output artifacts")
            ->required();
        auto* seed = sub->add_option("--seed", cfg.seed, "master RNG seed");
        if (needs_seed) seed->required();
        if (needs_input)
            sub->add_option("--input", cfg.input, "input data.csv")->required();
    };
    auto add_sim_flags = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.sim.n, "number of rows");
        sub->add_option("--m", cfg.sim.m, "number of covariates");
        sub->add_option("--theta-d", cfg.sim.theta_d, "treatment effect on the logit");
        sub->add_option("--decision-probs", decision_probs,
                        "8 values p_{h,a}, stratum-major: h0a0,h0a1,...,h3a1")
            ->delimiter(',')
            ->expected(8);
    };
    auto add_fit_flags = [&](CLI::App* sub) {
        sub->add_option("--prior-std", cfg.fit.prior_std, "prior standard deviation");
        sub->add_option("--lr", cfg.fit.learning_rate, "Adam learning rate");
        sub->add_option("--steps", cfg.fit.steps, "optimization steps");
        sub->add_option("--mc-samples", cfg.fit.mc_samples, "MC draws per gradient");
    };
    auto add_assess_flags = [&](CLI::App* sub) {
        sub->add_option("--draws", cfg.n_draws, "posterior imputation draws (S)");
        sub->add_option("--format", format, "report format: text or csv")
            ->check(CLI::IsMember({"text", "csv"}));
    };

    auto* sim = app.add_subcommand("simulate", "generate a synthetic decision dataset");
    add_common(sim, false, true);
    add_sim_flags(sim);

    auto* fit = app.add_subcommand("fit", "fit both arm posteriors with VI");
    add_common(fit, true, true);
    add_fit_flags(fit);

    auto* assess = app.add_subcommand("assess", "run the principal fairness assessment");
    add_common(assess, true, true);
    add_assess_flags(assess);

    auto* pipeline = app.add_subcommand("pipeline", "simulate, fit and assess in one run");
    add_common(pipeline, false, true);
    add_sim_flags(pipeline);
    add_fit_flags(pipeline);
    add_assess_flags(pipeline);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!decision_probs.empty()) cfg.sim.decision_prob = parse_decision_probs(decision_probs);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    cfg.format = format == "csv" ? pfaudit::ReportFormat::Csv : pfaudit::ReportFormat::Text;

    const std::string command = app.get_subcommands().front()->get_name();
    return pfaudit::run_command(command, cfg, std::cout, std::cerr);
}
