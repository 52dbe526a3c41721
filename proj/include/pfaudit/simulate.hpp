#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>

#include "pfaudit/dataset.hpp"

namespace pfaudit {

// Decision probabilities p_{h,a}, indexed [stratum][attribute].
using DecisionProbTable = std::array<std::array<double, 2>, 4>;

// Default table reproduces the reference unfairness pattern:
// Delta(Stable) = -0.2, Delta(Severe) = +0.2, others 0, with every cell
// far enough from 0/1 that all strata stay populated at n=5000.
inline constexpr DecisionProbTable kDefaultDecisionProbs = {{
    {{0.40, 0.20}}, // Stable
    {{0.80, 0.80}}, // Treatable
    {{0.20, 0.20}}, // BetterWithout
    {{0.40, 0.60}}, // Severe
}};

struct SimConfig {
    std::size_t n = 5000;
    std::size_t m = 100;
    double theta_d = -1.0;
    DecisionProbTable decision_prob = kDefaultDecisionProbs;
    std::uint64_t seed = 0;
};

// Generated dataset plus the ground truth an estimator never sees.
struct SimulatedDataset {
    Dataset data;
    PotentialOutcomes truth; // both arms known to the oracle
    std::vector<StratumLabel> strata;
    Eigen::VectorXd weights0; // generator theta_y0, length m
    Eigen::VectorXd weights1; // generator theta_y1, length m
};

// Appendix-style generator: A ~ Bern(0.5); X ~ N(0,1)^{n x m};
// theta_yd ~ N(0,1)^m; Y(d) ~ Bern(sigmoid(x.theta_yd + theta_d*d));
// H from the joint outcomes; D ~ Bern(p_{H,A}); observed Y = Y(D).
// Potential outcomes never read A. Deterministic given config.seed.
SimulatedDataset simulate(const SimConfig& config);

void check_sim_config(const SimConfig& config);

// Configured Delta(h) = p_{h,1} - p_{h,0}.
std::map<StratumLabel, double> true_delta(const SimConfig& config);

// Empirical Delta(h) from ground-truth strata and realized decisions:
// the frequency-counting oracle the Bayesian estimator is judged against.
// Cells with zero rows make that stratum's value nullopt.
std::map<StratumLabel, std::optional<double>> oracle_delta(const SimulatedDataset& sim);

// Truth sidecar (columns y0,y1,stratum_code), for oracle tests.
std::string truth_to_csv(const SimulatedDataset& sim,
                         const std::vector<std::string>& provenance = {});
void write_truth_csv(const std::string& path, const SimulatedDataset& sim,
                     const std::vector<std::string>& provenance = {});

} // namespace pfaudit
