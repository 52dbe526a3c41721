#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfaudit/dataset.hpp"
#include "pfaudit/vi.hpp"

namespace pfaudit {

// One posterior-complete table: observed arm copied from the data,
// missing arm sampled from the arm model, strata assigned.
struct ImputedDraw {
    PotentialOutcomes potential_outcomes;
    std::vector<StratumLabel> strata;
    std::size_t draw_index = 0;
};

struct StratumCell {
    long rows = 0;
    long treated = 0;
};

// Empirical Delta(h) = p(D=1 | h, A=1) - p(D=1 | h, A=0) per stratum,
// with the underlying cell counts. Strata with an empty (h,a) cell get
// nullopt, never a fabricated 0.
struct DeltaByStratum {
    std::array<std::array<StratumCell, 2>, 4> cells; // [stratum][attribute]
    std::array<std::optional<double>, 4> delta;

    std::optional<double> decision_rate(StratumLabel h, int a) const {
        const auto& cell = cells[static_cast<std::size_t>(h)][static_cast<std::size_t>(a)];
        if (cell.rows == 0) return std::nullopt;
        return static_cast<double>(cell.treated) / static_cast<double>(cell.rows);
    }
};

struct DeltaSummary {
    std::optional<double> mean;
    std::optional<double> lower; // 2.5% quantile across draws
    std::optional<double> upper; // 97.5% quantile across draws
    double defined_fraction = 0.0;
    bool unreliable = false; // defined_fraction < 0.5
};

struct StatisticalParity {
    std::optional<double> rate_a0; // p(D=1 | A=0)
    std::optional<double> rate_a1; // p(D=1 | A=1)
    std::optional<double> gap;     // rate_a1 - rate_a0
};

// p(Y=1 | D=d, A=a), empty cells undefined.
using CalibrationTable = std::array<std::array<std::optional<double>, 2>, 2>; // [d][a]
// p(D=1 | Y=y, A=a), empty cells undefined.
using AccuracyTable = std::array<std::array<std::optional<double>, 2>, 2>; // [y][a]

struct FairnessReport {
    std::array<DeltaSummary, 4> delta;                                   // per stratum
    std::array<std::array<std::optional<double>, 2>, 4> decision_prob;   // [h][a] posterior mean
    std::array<std::array<std::optional<double>, 2>, 4> strata_proportion; // [h][a] posterior mean
    StatisticalParity parity;
    CalibrationTable calibration_table;
    AccuracyTable accuracy_table;
    std::size_t draws_used = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> provenance; // fit configs, seeds, inputs
};

// Fills the missing potential outcome of every row from the arm model:
// treated rows keep Y(1) = Y and draw Y(0) ~ Bern(sigmoid(theta0 . x));
// control rows keep Y(0) = Y and draw Y(1) ~ Bern(sigmoid(theta1 . x)).
// model_matrix is the [covariates, A, 1] layout; theta vectors must match
// its column count. Deterministic given seed.
ImputedDraw impute_draw(const Dataset& data, const Eigen::MatrixXd& model_matrix,
                        const Eigen::VectorXd& theta0, const Eigen::VectorXd& theta1,
                        std::uint64_t seed, std::size_t draw_index = 0);

// Convenience overload that builds the model matrix itself.
ImputedDraw impute_draw(const Dataset& data, const Eigen::VectorXd& theta0,
                        const Eigen::VectorXd& theta1, std::uint64_t seed);

DeltaByStratum delta_by_stratum(const std::vector<StratumLabel>& strata,
                                const std::vector<int>& decision,
                                const std::vector<int>& attribute);

// The posterior imputation loop: S times (sample theta0, theta1; impute;
// delta_by_stratum), then aggregate means, 2.5/97.5% quantiles, decision
// probabilities and strata proportions across draws, plus the
// associational block computed once on the observed data.
FairnessReport assess_principal_fairness(const Dataset& data,
                                         const VariationalPosterior& post0,
                                         const VariationalPosterior& post1,
                                         std::size_t n_draws, std::uint64_t seed);

// Oracle bypass: the same aggregation fed one fixed stratum assignment
// (e.g. simulator ground truth) instead of posterior imputations.
FairnessReport assess_with_strata(const Dataset& data,
                                  const std::vector<StratumLabel>& strata);

StatisticalParity statistical_parity(const Dataset& data);
CalibrationTable calibration(const Dataset& data);
AccuracyTable accuracy_metric(const Dataset& data);

} // namespace pfaudit
