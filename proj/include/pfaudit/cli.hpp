#pragma once

#include <iosfwd>
#include <string>

#include "pfaudit/fairness.hpp"
#include "pfaudit/simulate.hpp"

namespace pfaudit {

enum class ReportFormat { Text, Csv };

// One parsed invocation. The same master seed drives every stage; each
// stage derives its own substreams from it, so pipeline output equals
// the composition of the three standalone stages.
struct RunConfig {
    std::string input;      // data.csv for fit/assess
    std::string output_dir; // artifacts land here
    SimConfig sim;
    FitConfig fit;
    std::size_t n_draws = 100; // S
    std::uint64_t seed = 0;
    ReportFormat format = ReportFormat::Text;
};

// simulate: writes data.csv + truth.csv, prints the configured delta table.
void cmd_simulate(const RunConfig& cfg, std::ostream& out);

// fit: validates the input, fits both arm models, writes posterior_y0.txt,
// posterior_y1.txt and elbo_trace.csv.
void cmd_fit(const RunConfig& cfg, std::ostream& out);

// assess: loads data + both posterior artifacts from output_dir, runs the
// imputation loop and the associational metrics, writes report.txt or
// report.csv.
void cmd_assess(const RunConfig& cfg, std::ostream& out);

// simulate -> fit -> assess with the same seed and output_dir.
void cmd_pipeline(const RunConfig& cfg, std::ostream& out);

// Exit-code taxonomy: 0 ok, 2 validation, 3 numeric, 4 i/o.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out,
                std::ostream& err);

} // namespace pfaudit
