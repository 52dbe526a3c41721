#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "pfaudit/cli.hpp"
#include "pfaudit/csv.hpp"
#include "pfaudit/posterior_io.hpp"
#include "support.hpp"

using namespace pfaudit;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& tag) {
    const auto dir = fs::temp_directory_path() / ("pfaudit_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

RunConfig base_config(const std::string& dir) {
    RunConfig cfg;
    cfg.output_dir = dir;
    cfg.seed = 21;
    cfg.sim.n = 240;
    cfg.sim.m = 3;
    cfg.fit.steps = 120;
    cfg.n_draws = 30;
    return cfg;
}

} // namespace

TEST_CASE("csv parser reports the offending location") {
    CHECK_THROWS_WITH_AS(parse_csv("D,A,Y,X1\n1,0,zzz,0.5\n", "t.csv"),
                         doctest::Contains("t.csv:2"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_csv("D,A,Y,X1\n1,0,1\n", "t.csv"),
                         doctest::Contains("expected 4 fields"), ValidationError);
    CHECK_THROWS_AS(parse_csv("", "t.csv"), ValidationError);
    CHECK_THROWS_AS(parse_csv("# only comments\n", "t.csv"), ValidationError);
}

TEST_CASE("csv parser skips comments and blank lines") {
    const RawTable t = parse_csv("# provenance here\nD,A,Y,X1\n\n1,0,1,0.25\n0,1,0,-2\n");
    CHECK(t.n_rows == 2);
    CHECK(t.column_names == std::vector<std::string>{"D", "A", "Y", "X1"});
    CHECK(t.columns[3][1] == -2.0);
}

TEST_CASE("posterior artifact round-trips exactly") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        PosteriorArtifact artifact;
        artifact.arm = rep % 2 == 0 ? "y0" : "y1";
        const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng() % 6);
        artifact.posterior.mu = Eigen::VectorXd::Random(p);
        artifact.posterior.log_sigma = Eigen::VectorXd::Random(p);
        for (Eigen::Index j = 0; j < p; ++j)
            artifact.feature_names.push_back("f" + std::to_string(j));
        artifact.fit_config.seed = rng();
        artifact.fit_config.steps = 77;
        artifact.final_elbo = -123.456789;
        if (rep == 0) artifact.warnings.push_back("prior-dominated arm");

        const PosteriorArtifact back = posterior_from_text(posterior_to_text(artifact));
        CHECK(back.arm == artifact.arm);
        CHECK(back.feature_names == artifact.feature_names);
        CHECK(back.posterior.mu == artifact.posterior.mu);
        CHECK(back.posterior.log_sigma == artifact.posterior.log_sigma);
        CHECK(back.fit_config.seed == artifact.fit_config.seed);
        CHECK(back.fit_config.steps == artifact.fit_config.steps);
        CHECK(back.final_elbo == artifact.final_elbo);
        CHECK(back.warnings == artifact.warnings);
    }
}

TEST_CASE("posterior loader rejects inconsistent artifacts") {
    PosteriorArtifact artifact;
    artifact.arm = "y0";
    artifact.posterior.mu = Eigen::VectorXd::Zero(3);
    artifact.posterior.log_sigma = Eigen::VectorXd::Zero(3);
    artifact.feature_names = {"a", "b", "c"};
    std::string text = posterior_to_text(artifact);
    text.replace(text.find("p: 3"), 4, "p: 4");
    CHECK_THROWS_WITH_AS(posterior_from_text(text), doctest::Contains("inconsistent"),
                         ValidationError);
    CHECK_THROWS_AS(posterior_from_text("model: bayes_logistic\n"), ValidationError);
}

TEST_CASE("cmd_simulate writes the data contract and is byte-stable") {
    const auto dir = temp_dir("sim");
    RunConfig cfg = base_config(dir);
    cfg.sim.n = 10;
    std::ostringstream out;
    cmd_simulate(cfg, out);
    CHECK(out.str().find("configured delta") != std::string::npos);

    const std::string first = read_text_file(dir + "/data.csv");
    const Dataset data = validate_dataset(read_csv_table(dir + "/data.csv"));
    CHECK(data.n_rows() == 10);
    CHECK(data.n_features() == 3);

    // rerun with the same seed: byte-identical artifacts
    cmd_simulate(cfg, out);
    CHECK(read_text_file(dir + "/data.csv") == first);

    // truth sidecar agrees with the dataset via the sim invariants
    const RawTable truth = read_csv_table(dir + "/truth.csv");
    CHECK(truth.n_rows == 10);
    CHECK(truth.column_names == std::vector<std::string>{"y0", "y1", "stratum_code"});
    for (std::size_t i = 0; i < truth.n_rows; ++i) {
        const int y0 = static_cast<int>(truth.columns[0][i]);
        const int y1 = static_cast<int>(truth.columns[1][i]);
        CHECK(static_cast<int>(truth.columns[2][i]) ==
              static_cast<int>(stratum_from_outcomes(y0, y1)));
        const int expect = data.decision[i] == 1 ? y1 : y0;
        CHECK(data.outcome[i] == expect);
    }
}

TEST_CASE("fit then assess produces a readable report with provenance") {
    const auto dir = temp_dir("fitassess");
    RunConfig cfg = base_config(dir);
    std::ostringstream out;
    cmd_simulate(cfg, out);
    cfg.input = dir + "/data.csv";
    cmd_fit(cfg, out);

    const PosteriorArtifact art0 = load_posterior(dir + "/posterior_y0.txt");
    const PosteriorArtifact art1 = load_posterior(dir + "/posterior_y1.txt");
    CHECK(art0.arm == "y0");
    CHECK(art1.arm == "y1");
    CHECK(art0.posterior.dim() == static_cast<Eigen::Index>(cfg.sim.m) + 2);
    CHECK(art0.feature_names.back() == kInterceptFeature);
    CHECK(art0.fit_config.seed != art1.fit_config.seed);

    const std::string trace = read_text_file(dir + "/elbo_trace.csv");
    CHECK(trace.find("arm,step,elbo") != std::string::npos);
    CHECK(trace.find("y0,0,") != std::string::npos);
    CHECK(trace.find("y1," + std::to_string(cfg.fit.steps - 1) + ",") != std::string::npos);

    cmd_assess(cfg, out);
    const std::string report = read_text_file(dir + "/report.txt");
    CHECK(report.find("principal fairness report") != std::string::npos);
    CHECK(report.find("seed:        21") != std::string::npos);
    CHECK(report.find("fit_y0") != std::string::npos);

    cfg.format = ReportFormat::Csv;
    cmd_assess(cfg, out);
    const std::string csv = read_text_file(dir + "/report.csv");
    CHECK(csv.find("block,key1,key2,metric,value") != std::string::npos);
    CHECK(csv.find("delta,Stable,,mean,") != std::string::npos);
}

TEST_CASE("fit warns when an arm is prior-dominated") {
    const auto dir = temp_dir("degenerate");
    // one treated row only
    std::string csv = "D,A,Y,X1\n1,1,1,0.5\n";
    for (int i = 0; i < 20; ++i) csv += "0," + std::to_string(i % 2) + ",1,-0.25\n";
    write_text_file(dir + "/data.csv", csv);

    RunConfig cfg = base_config(dir);
    cfg.input = dir + "/data.csv";
    cfg.fit.steps = 40;
    std::ostringstream out;
    cmd_fit(cfg, out);
    CHECK(out.str().find("prior-dominated") != std::string::npos);
    const PosteriorArtifact art1 = load_posterior(dir + "/posterior_y1.txt");
    REQUIRE(art1.warnings.size() == 1);
    CHECK(art1.warnings[0].find("theta_y1") != std::string::npos);
}

TEST_CASE("assess rejects layout mismatches naming both counts") {
    const auto dir = temp_dir("layout");
    RunConfig cfg = base_config(dir);
    std::ostringstream out;
    cmd_simulate(cfg, out); // 3 covariates -> p = 5
    cfg.input = dir + "/data.csv";

    PosteriorArtifact small;
    small.arm = "y0";
    small.posterior.mu = Eigen::VectorXd::Zero(2);
    small.posterior.log_sigma = Eigen::VectorXd::Zero(2);
    small.feature_names = {"X1", kInterceptFeature};
    save_posterior(dir + "/posterior_y0.txt", small);
    small.arm = "y1";
    save_posterior(dir + "/posterior_y1.txt", small);

    try {
        cmd_assess(cfg, out);
        FAIL("expected layout mismatch");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("2 coordinates") != std::string::npos);
        CHECK(msg.find("needs 5") != std::string::npos);
    }
}

TEST_CASE("pipeline equals the composition of its stages") {
    const auto dir_a = temp_dir("pipeline_a");
    const auto dir_b = temp_dir("pipeline_b");
    std::ostringstream out;

    RunConfig pipe = base_config(dir_a);
    pipe.format = ReportFormat::Csv;
    cmd_pipeline(pipe, out);

    RunConfig staged = base_config(dir_b);
    staged.format = ReportFormat::Csv;
    cmd_simulate(staged, out);
    staged.input = dir_b + "/data.csv";
    cmd_fit(staged, out);
    cmd_assess(staged, out);

    for (const std::string name : {"data.csv", "truth.csv", "posterior_y0.txt",
                                   "posterior_y1.txt", "elbo_trace.csv", "report.csv"}) {
        std::string a = read_text_file(dir_a + "/" + name);
        std::string b = read_text_file(dir_b + "/" + name);
        // artifact bodies must match byte for byte once the embedded input
        // path (the only path-dependent field) is normalized
        const std::string needle_a = dir_a;
        std::size_t pos;
        while ((pos = a.find(needle_a)) != std::string::npos) a.replace(pos, needle_a.size(), "@");
        const std::string needle_b = dir_b;
        while ((pos = b.find(needle_b)) != std::string::npos) b.replace(pos, needle_b.size(), "@");
        CHECK(a == b);
    }
}

TEST_CASE("run_command maps error classes to exit codes") {
    const auto dir = temp_dir("codes");
    std::ostringstream out, err;

    RunConfig ok = base_config(dir);
    ok.sim.n = 40;
    CHECK(run_command("simulate", ok, out, err) == 0);

    RunConfig bad_cfg = ok;
    bad_cfg.sim.decision_prob[0][0] = 7.0;
    CHECK(run_command("simulate", bad_cfg, out, err) == 2);

    RunConfig missing = ok;
    missing.input = dir + "/does_not_exist.csv";
    CHECK(run_command("fit", missing, out, err) == 4);

    // single-arm data fails validation inside fit
    write_text_file(dir + "/one_arm.csv", "D,A,Y,X1\n1,0,1,0.5\n1,1,0,0.25\n");
    RunConfig one_arm = ok;
    one_arm.input = dir + "/one_arm.csv";
    CHECK(run_command("fit", one_arm, out, err) == 2);
    CHECK(err.str().find("no control rows") != std::string::npos);

    // numeric failure: non-finite covariate sneaks past the reader? it
    // cannot; force it through the fit layer instead
    CHECK(run_command("unknown", ok, out, err) == 2);
}

TEST_CASE("numeric failures exit with code 3") {
    const auto dir = temp_dir("numeric");
    // inf covariates are rejected by validation (code 2), so a numeric
    // abort must come from the optimizer itself: an absurd learning rate
    // overflows mu^2 in the prior term on the second step
    RunConfig cfg = base_config(dir);
    cfg.sim.n = 30;
    std::ostringstream out, err;
    REQUIRE(run_command("simulate", cfg, out, err) == 0);
    cfg.input = dir + "/data.csv";
    cfg.fit.learning_rate = 1e308;
    cfg.fit.steps = 5;
    CHECK(run_command("fit", cfg, out, err) == 3);
    CHECK(err.str().find("step") != std::string::npos);
}
