#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pfaudit/common.hpp"

namespace pfaudit {

// The four principal strata, keyed by the joint potential outcomes
// (y0, y1). Integer codes are part of the file contracts.
enum class StratumLabel : int {
    Stable = 0,        // (0,0)
    Treatable = 1,     // (1,0)
    BetterWithout = 2, // (0,1)
    Severe = 3,        // (1,1)
};

inline constexpr std::array<StratumLabel, 4> kAllStrata = {
    StratumLabel::Stable, StratumLabel::Treatable,
    StratumLabel::BetterWithout, StratumLabel::Severe};

const char* stratum_name(StratumLabel h);
StratumLabel stratum_from_code(int code);

// Maps joint potential outcomes to the stratum label.
StratumLabel stratum_from_outcomes(int y0, int y1);

// Untyped column store straight from a parser; validate_dataset turns it
// into a Dataset or rejects it with a named diagnostic.
struct RawTable {
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns; // column-major, equal lengths
    std::size_t n_rows = 0;
};

// Validated decision table. Immutable by convention once built; every
// other module takes it by const reference.
struct Dataset {
    std::vector<int> decision;  // D, 0/1
    std::vector<int> attribute; // A, 0/1
    std::vector<int> outcome;   // Y = Y(D), 0/1
    Eigen::MatrixXd covariates; // n x m, finite
    std::vector<std::string> covariate_names; // size m
    std::vector<std::string> row_labels;      // optional opaque IDs; empty or size n

    std::size_t n_rows() const { return decision.size(); }
    std::size_t n_features() const { return static_cast<std::size_t>(covariates.cols()); }
};

// Potential outcomes for every row; exactly one arm per row is observed
// and equals the dataset outcome (consistency).
struct PotentialOutcomes {
    enum class Source : std::uint8_t { Observed = 0, Imputed = 1 };
    std::vector<int> y0;
    std::vector<int> y1;
    std::vector<Source> source_y0;
    std::vector<Source> source_y1;
};

// Builds a Dataset from a raw table, enforcing every invariant:
// binary D/A/Y, finite covariates, equal column lengths, both arms present.
// Reserved column names are D, A, Y; all other columns become covariates
// in file order. Row order is preserved.
Dataset validate_dataset(const RawTable& raw);

// Re-checks Dataset invariants on an already-built instance (used by the
// simulator and by tests that construct datasets directly).
void check_dataset(const Dataset& data);

// Partition of row indices by decision arm: (treated, control).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_by_treatment(const Dataset& data);

// Model feature layout shared by vi and fairness: [covariates..., A, 1].
// p = m + 2.
Eigen::MatrixXd model_features(const Dataset& data);
std::vector<std::string> model_feature_names(const Dataset& data);
inline constexpr const char* kAttributeFeature = "A";
inline constexpr const char* kInterceptFeature = "__intercept__";

} // namespace pfaudit
