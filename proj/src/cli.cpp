#include "pfaudit/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "pfaudit/csv.hpp"
#include "pfaudit/posterior_io.hpp"
#include "pfaudit/report.hpp"

namespace pfaudit {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kFitArm0Stream = 10;
constexpr std::uint64_t kFitArm1Stream = 11;

std::string decision_probs_flag(const DecisionProbTable& table) {
    std::string out;
    for (const auto& row : table)
        for (double p : row) {
            if (!out.empty()) out += ',';
            out += format_double(p);
        }
    return out;
}

std::string simulate_provenance(const RunConfig& cfg) {
    return "pfaudit simulate n=" + std::to_string(cfg.sim.n) + " m=" + std::to_string(cfg.sim.m) +
           " theta_d=" + format_double(cfg.sim.theta_d) +
           " decision_probs=" + decision_probs_flag(cfg.sim.decision_prob) +
           " seed=" + std::to_string(cfg.sim.seed);
}

std::string fit_provenance(const RunConfig& cfg, const std::string& input) {
    return "pfaudit fit input=" + input + " prior_std=" + format_double(cfg.fit.prior_std) +
           " lr=" + format_double(cfg.fit.learning_rate) +
           " steps=" + std::to_string(cfg.fit.steps) +
           " mc_samples=" + std::to_string(cfg.fit.mc_samples) +
           " seed=" + std::to_string(cfg.seed);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    if (cfg.output_dir.empty()) throw ValidationError("output directory not set");
    fs::create_directories(cfg.output_dir);
    return (fs::path(cfg.output_dir) / name).string();
}

void require_input(const RunConfig& cfg) {
    if (cfg.input.empty()) throw ValidationError("input path not set");
    if (!fs::exists(cfg.input)) throw IoError("input path does not exist: " + cfg.input);
}

// Arm design: [covariates, A] on the arm's rows; fit appends the intercept.
Eigen::MatrixXd arm_features(const Dataset& data, const std::vector<std::size_t>& rows) {
    const auto m = static_cast<Eigen::Index>(data.n_features());
    Eigen::MatrixXd f(static_cast<Eigen::Index>(rows.size()), m + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto i = static_cast<Eigen::Index>(rows[r]);
        f.row(static_cast<Eigen::Index>(r)).head(m) = data.covariates.row(i);
        f(static_cast<Eigen::Index>(r), m) = static_cast<double>(data.attribute[rows[r]]);
    }
    return f;
}

Eigen::VectorXd arm_labels(const Dataset& data, const std::vector<std::size_t>& rows) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        y(static_cast<Eigen::Index>(r)) = static_cast<double>(data.outcome[rows[r]]);
    return y;
}

} // namespace

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    SimConfig sim_cfg = cfg.sim;
    sim_cfg.seed = cfg.seed;
    const SimulatedDataset sim = simulate(sim_cfg);

    RunConfig prov_cfg = cfg;
    prov_cfg.sim = sim_cfg;
    const std::string provenance = simulate_provenance(prov_cfg);
    write_dataset_csv(out_path(cfg, "data.csv"), sim.data, {provenance});
    write_truth_csv(out_path(cfg, "truth.csv"), sim, {provenance});

    out << "wrote " << out_path(cfg, "data.csv") << " (" << sim.data.n_rows() << " rows, "
        << 3 + sim.data.n_features() << " columns)\n";
    out << "configured delta (p_{h,1} - p_{h,0}):\n";
    for (const auto& [h, d] : true_delta(sim_cfg)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%+.4g", d);
        out << "  " << stratum_name(h) << ": " << buf << "\n";
    }
}

void cmd_fit(const RunConfig& cfg, std::ostream& out) {
    require_input(cfg);
    const Dataset data = validate_dataset(read_csv_table(cfg.input));
    const auto [treated, control] = split_by_treatment(data);
    const std::string provenance = fit_provenance(cfg, cfg.input);
    const auto p = data.n_features() + 2;

    std::string trace_csv = "# " + provenance + "\narm,step,elbo\n";
    const std::array<const char*, 2> arm_name = {"y0", "y1"};
    const std::array<const std::vector<std::size_t>*, 2> arm_rows = {&control, &treated};
    const std::array<std::uint64_t, 2> arm_stream = {kFitArm0Stream, kFitArm1Stream};
    for (int arm = 0; arm < 2; ++arm) {
        const auto& rows = *arm_rows[static_cast<std::size_t>(arm)];
        FitConfig fit_cfg = cfg.fit;
        fit_cfg.seed = derive_seed(cfg.seed, arm_stream[static_cast<std::size_t>(arm)]);
        const FitResult fit =
            fit_bayes_logistic(arm_features(data, rows), arm_labels(data, rows), fit_cfg);

        PosteriorArtifact artifact;
        artifact.arm = arm_name[static_cast<std::size_t>(arm)];
        artifact.input = cfg.input;
        artifact.feature_names = model_feature_names(data);
        artifact.posterior = fit.posterior;
        artifact.fit_config = fit_cfg;
        artifact.final_elbo = fit.final_elbo;
        if (rows.size() < p) {
            std::ostringstream w;
            w << "theta_" << artifact.arm << " fit on " << rows.size() << " rows with " << p
              << " parameters; posterior is prior-dominated";
            artifact.warnings.push_back(w.str());
            out << "warning: " << w.str() << "\n";
        }
        const std::string name = std::string("posterior_") + artifact.arm + ".txt";
        save_posterior(out_path(cfg, name), artifact);
        out << "wrote " << out_path(cfg, name) << " (final ELBO "
            << format_double(fit.final_elbo) << ")\n";

        for (const auto& point : fit.trace)
            trace_csv += std::string(artifact.arm) + "," + std::to_string(point.step) + "," +
                         format_double(point.elbo) + "\n";
    }
    write_text_file(out_path(cfg, "elbo_trace.csv"), trace_csv);
    out << "wrote " << out_path(cfg, "elbo_trace.csv") << "\n";
}

void cmd_assess(const RunConfig& cfg, std::ostream& out) {
    require_input(cfg);
    const Dataset data = validate_dataset(read_csv_table(cfg.input));
    const PosteriorArtifact art0 = load_posterior(out_path(cfg, "posterior_y0.txt"));
    const PosteriorArtifact art1 = load_posterior(out_path(cfg, "posterior_y1.txt"));

    const auto expected = model_feature_names(data);
    for (const auto* art : {&art0, &art1}) {
        if (static_cast<std::size_t>(art->posterior.dim()) != expected.size())
            throw ValidationError(
                "layout mismatch: posterior_" + art->arm + " has " +
                std::to_string(art->posterior.dim()) + " coordinates but the data needs " +
                std::to_string(expected.size()) + " (" + std::to_string(data.n_features()) +
                " covariates + A + intercept)");
        if (art->feature_names != expected)
            throw ValidationError("layout mismatch: posterior_" + art->arm +
                                  " feature names do not match the data's columns");
    }

    FairnessReport report =
        assess_principal_fairness(data, art0.posterior, art1.posterior, cfg.n_draws, cfg.seed);
    report.provenance.push_back("input=" + cfg.input);
    report.provenance.push_back("fit_y0 seed=" + std::to_string(art0.fit_config.seed) +
                                " steps=" + std::to_string(art0.fit_config.steps) +
                                " final_elbo=" + format_double(art0.final_elbo));
    report.provenance.push_back("fit_y1 seed=" + std::to_string(art1.fit_config.seed) +
                                " steps=" + std::to_string(art1.fit_config.steps) +
                                " final_elbo=" + format_double(art1.final_elbo));
    for (const auto& w : art0.warnings) report.provenance.push_back("warning: " + w);
    for (const auto& w : art1.warnings) report.provenance.push_back("warning: " + w);

    if (cfg.format == ReportFormat::Text) {
        write_text_file(out_path(cfg, "report.txt"), report_to_text(report));
        out << "wrote " << out_path(cfg, "report.txt") << "\n";
    } else {
        write_text_file(out_path(cfg, "report.csv"), report_to_csv(report));
        out << "wrote " << out_path(cfg, "report.csv") << "\n";
    }
}

void cmd_pipeline(const RunConfig& cfg, std::ostream& out) {
    cmd_simulate(cfg, out);
    RunConfig staged = cfg;
    staged.input = out_path(cfg, "data.csv");
    cmd_fit(staged, out);
    cmd_assess(staged, out);
}

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out,
                std::ostream& err) {
    try {
        if (command == "simulate") {
            cmd_simulate(cfg, out);
        } else if (command == "fit") {
            cmd_fit(cfg, out);
        } else if (command == "assess") {
            cmd_assess(cfg, out);
        } else if (command == "pipeline") {
            cmd_pipeline(cfg, out);
        } else {
            err << "unknown command: " << command << "\n";
            return 2;
        }
        return 0;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "i/o error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace pfaudit
