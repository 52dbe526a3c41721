#include "pfaudit/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace pfaudit {

const char* stratum_name(StratumLabel h) {
    switch (h) {
    case StratumLabel::Stable: return "Stable";
    case StratumLabel::Treatable: return "Treatable";
    case StratumLabel::BetterWithout: return "BetterWithout";
    case StratumLabel::Severe: return "Severe";
    }
    return "?";
}

StratumLabel stratum_from_code(int code) {
    if (code < 0 || code > 3)
        throw ValidationError("stratum code out of range: " + std::to_string(code));
    return static_cast<StratumLabel>(code);
}

StratumLabel stratum_from_outcomes(int y0, int y1) {
    if ((y0 != 0 && y0 != 1) || (y1 != 0 && y1 != 1))
        throw ValidationError("potential outcomes must be 0/1");
    if (y0 == 0 && y1 == 0) return StratumLabel::Stable;
    if (y0 == 1 && y1 == 0) return StratumLabel::Treatable;
    if (y0 == 0 && y1 == 1) return StratumLabel::BetterWithout;
    return StratumLabel::Severe;
}

namespace {

// Parses a reserved binary column; diagnostics carry column name and row.
std::vector<int> binary_column(const std::string& name, const std::vector<double>& col) {
    std::vector<int> out(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) {
        if (col[i] == 0.0) {
            out[i] = 0;
        } else if (col[i] == 1.0) {
            out[i] = 1;
        } else {
            throw ValidationError("column " + name + " must be 0/1; found " +
                                  format_double(col[i]) + " at row " + std::to_string(i));
        }
    }
    return out;
}

} // namespace

Dataset validate_dataset(const RawTable& raw) {
    if (raw.column_names.size() != raw.columns.size())
        throw ValidationError("raw table: column name/data count mismatch");

    int id_d = -1, id_a = -1, id_y = -1;
    std::vector<std::size_t> covariate_cols;
    for (std::size_t c = 0; c < raw.column_names.size(); ++c) {
        const std::string& name = raw.column_names[c];
        if (name == "D") {
            if (id_d >= 0) throw ValidationError("duplicate column D");
            id_d = static_cast<int>(c);
        } else if (name == "A") {
            if (id_a >= 0) throw ValidationError("duplicate column A");
            id_a = static_cast<int>(c);
        } else if (name == "Y") {
            if (id_y >= 0) throw ValidationError("duplicate column Y");
            id_y = static_cast<int>(c);
        } else {
            covariate_cols.push_back(c);
        }
    }
    if (id_d < 0) throw ValidationError("missing required column D");
    if (id_a < 0) throw ValidationError("missing required column A");
    if (id_y < 0) throw ValidationError("missing required column Y");
    if (covariate_cols.empty())
        throw ValidationError("no covariate columns (need at least one besides D, A, Y)");

    for (std::size_t c = 0; c < raw.columns.size(); ++c) {
        if (raw.columns[c].size() != raw.n_rows)
            throw ValidationError("column " + raw.column_names[c] + " has " +
                                  std::to_string(raw.columns[c].size()) + " rows, expected " +
                                  std::to_string(raw.n_rows));
    }
    if (raw.n_rows == 0) throw ValidationError("empty table");

    Dataset data;
    data.decision = binary_column("D", raw.columns[static_cast<std::size_t>(id_d)]);
    data.attribute = binary_column("A", raw.columns[static_cast<std::size_t>(id_a)]);
    data.outcome = binary_column("Y", raw.columns[static_cast<std::size_t>(id_y)]);

    const auto n = static_cast<Eigen::Index>(raw.n_rows);
    const auto m = static_cast<Eigen::Index>(covariate_cols.size());
    data.covariates.resize(n, m);
    data.covariate_names.reserve(covariate_cols.size());
    for (Eigen::Index j = 0; j < m; ++j) {
        const std::size_t c = covariate_cols[static_cast<std::size_t>(j)];
        data.covariate_names.push_back(raw.column_names[c]);
        const auto& col = raw.columns[c];
        for (Eigen::Index i = 0; i < n; ++i) {
            const double v = col[static_cast<std::size_t>(i)];
            if (!std::isfinite(v))
                throw ValidationError("non-finite covariate in column " + raw.column_names[c] +
                                      " at row " + std::to_string(i));
            data.covariates(i, j) = v;
        }
    }

    check_dataset(data);
    return data;
}

void check_dataset(const Dataset& data) {
    const std::size_t n = data.decision.size();
    if (n == 0) throw ValidationError("empty dataset");
    if (data.attribute.size() != n || data.outcome.size() != n)
        throw ValidationError("column length mismatch: D/A/Y sizes differ");
    if (static_cast<std::size_t>(data.covariates.rows()) != n)
        throw ValidationError("column length mismatch: covariates have " +
                              std::to_string(data.covariates.rows()) + " rows, expected " +
                              std::to_string(n));
    if (data.covariate_names.size() != data.n_features())
        throw ValidationError("covariate name count mismatch");
    if (!data.row_labels.empty() && data.row_labels.size() != n)
        throw ValidationError("row label count mismatch");

    auto check_binary = [n](const char* name, const std::vector<int>& col) {
        for (std::size_t i = 0; i < n; ++i)
            if (col[i] != 0 && col[i] != 1)
                throw ValidationError(std::string("column ") + name + " must be 0/1; found " +
                                      std::to_string(col[i]) + " at row " + std::to_string(i));
    };
    check_binary("D", data.decision);
    check_binary("A", data.attribute);
    check_binary("Y", data.outcome);

    if (!data.covariates.allFinite())
        throw ValidationError("covariates contain non-finite values");

    const bool any_treated = std::find(data.decision.begin(), data.decision.end(), 1) != data.decision.end();
    const bool any_control = std::find(data.decision.begin(), data.decision.end(), 0) != data.decision.end();
    if (!any_treated) throw ValidationError("no treated rows (every D is 0)");
    if (!any_control) throw ValidationError("no control rows (every D is 1)");
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_by_treatment(const Dataset& data) {
    std::vector<std::size_t> treated, control;
    for (std::size_t i = 0; i < data.n_rows(); ++i)
        (data.decision[i] == 1 ? treated : control).push_back(i);
    return {std::move(treated), std::move(control)};
}

Eigen::MatrixXd model_features(const Dataset& data) {
    const auto n = static_cast<Eigen::Index>(data.n_rows());
    const auto m = static_cast<Eigen::Index>(data.n_features());
    Eigen::MatrixXd f(n, m + 2);
    f.leftCols(m) = data.covariates;
    for (Eigen::Index i = 0; i < n; ++i)
        f(i, m) = static_cast<double>(data.attribute[static_cast<std::size_t>(i)]);
    f.col(m + 1).setOnes();
    return f;
}

std::vector<std::string> model_feature_names(const Dataset& data) {
    std::vector<std::string> names = data.covariate_names;
    names.emplace_back(kAttributeFeature);
    names.emplace_back(kInterceptFeature);
    return names;
}

} // namespace pfaudit
