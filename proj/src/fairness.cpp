#include "pfaudit/fairness.hpp"

#include <algorithm>
#include <random>

namespace pfaudit {

ImputedDraw impute_draw(const Dataset& data, const Eigen::MatrixXd& model_matrix,
                        const Eigen::VectorXd& theta0, const Eigen::VectorXd& theta1,
                        std::uint64_t seed, std::size_t draw_index) {
    const auto n = data.n_rows();
    if (static_cast<std::size_t>(model_matrix.rows()) != n)
        throw ValidationError("impute_draw: model matrix row count mismatch");
    if (theta0.size() != model_matrix.cols() || theta1.size() != model_matrix.cols())
        throw ValidationError("impute_draw: theta length " + std::to_string(theta0.size()) +
                              "/" + std::to_string(theta1.size()) +
                              " does not match model feature count " +
                              std::to_string(model_matrix.cols()));

    ImputedDraw draw;
    draw.draw_index = draw_index;
    auto& po = draw.potential_outcomes;
    po.y0.resize(n);
    po.y1.resize(n);
    po.source_y0.resize(n);
    po.source_y1.resize(n);
    draw.strata.resize(n);

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = model_matrix.row(static_cast<Eigen::Index>(i));
        if (data.decision[i] == 1) {
            po.y1[i] = data.outcome[i];
            po.source_y1[i] = PotentialOutcomes::Source::Observed;
            std::bernoulli_distribution b(sigmoid(row.dot(theta0)));
            po.y0[i] = b(rng) ? 1 : 0;
            po.source_y0[i] = PotentialOutcomes::Source::Imputed;
        } else {
            po.y0[i] = data.outcome[i];
            po.source_y0[i] = PotentialOutcomes::Source::Observed;
            std::bernoulli_distribution b(sigmoid(row.dot(theta1)));
            po.y1[i] = b(rng) ? 1 : 0;
            po.source_y1[i] = PotentialOutcomes::Source::Imputed;
        }
        draw.strata[i] = stratum_from_outcomes(po.y0[i], po.y1[i]);
    }
    return draw;
}

ImputedDraw impute_draw(const Dataset& data, const Eigen::VectorXd& theta0,
                        const Eigen::VectorXd& theta1, std::uint64_t seed) {
    return impute_draw(data, model_features(data), theta0, theta1, seed);
}

DeltaByStratum delta_by_stratum(const std::vector<StratumLabel>& strata,
                                const std::vector<int>& decision,
                                const std::vector<int>& attribute) {
    const auto n = strata.size();
    if (decision.size() != n || attribute.size() != n)
        throw ValidationError("delta_by_stratum: input vectors differ in length");

    DeltaByStratum out;
    for (std::size_t i = 0; i < n; ++i) {
        auto& cell = out.cells[static_cast<std::size_t>(strata[i])]
                              [static_cast<std::size_t>(attribute[i])];
        cell.rows += 1;
        cell.treated += decision[i];
    }
    for (auto h : kAllStrata) {
        const auto rate1 = out.decision_rate(h, 1);
        const auto rate0 = out.decision_rate(h, 0);
        if (rate1 && rate0) out.delta[static_cast<std::size_t>(h)] = *rate1 - *rate0;
    }
    return out;
}

namespace {

std::optional<double> ratio(long num, long den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

// Aggregates per-draw delta tables into the report blocks. The
// associational block does not depend on the draws and is filled from
// the observed data alone.
FairnessReport aggregate(const Dataset& data, const std::vector<DeltaByStratum>& per_draw) {
    FairnessReport report;
    report.draws_used = per_draw.size();
    const auto S = static_cast<double>(per_draw.size());

    long group_rows[2] = {0, 0};
    for (std::size_t i = 0; i < data.n_rows(); ++i)
        group_rows[static_cast<std::size_t>(data.attribute[i])] += 1;

    for (auto h : kAllStrata) {
        const auto hi = static_cast<std::size_t>(h);
        std::vector<double> defined;
        defined.reserve(per_draw.size());
        for (const auto& d : per_draw)
            if (d.delta[hi]) defined.push_back(*d.delta[hi]);

        DeltaSummary& summary = report.delta[hi];
        summary.defined_fraction = static_cast<double>(defined.size()) / S;
        summary.unreliable = summary.defined_fraction < 0.5;
        if (!defined.empty()) {
            double sum = 0.0;
            for (double v : defined) sum += v;
            summary.mean = sum / static_cast<double>(defined.size());
            std::sort(defined.begin(), defined.end());
            summary.lower = quantile_sorted(defined, 0.025);
            summary.upper = quantile_sorted(defined, 0.975);
        }

        for (int a = 0; a < 2; ++a) {
            const auto ai = static_cast<std::size_t>(a);
            double rate_sum = 0.0;
            std::size_t rate_n = 0;
            double share_sum = 0.0;
            std::size_t share_n = 0;
            for (const auto& d : per_draw) {
                if (auto r = d.decision_rate(h, a)) {
                    rate_sum += *r;
                    ++rate_n;
                }
                if (group_rows[ai] > 0) {
                    share_sum += static_cast<double>(d.cells[hi][ai].rows) /
                                 static_cast<double>(group_rows[ai]);
                    ++share_n;
                }
            }
            if (rate_n > 0) report.decision_prob[hi][ai] = rate_sum / static_cast<double>(rate_n);
            if (share_n > 0)
                report.strata_proportion[hi][ai] = share_sum / static_cast<double>(share_n);
        }
    }

    report.parity = statistical_parity(data);
    report.calibration_table = calibration(data);
    report.accuracy_table = accuracy_metric(data);
    return report;
}

} // namespace

FairnessReport assess_principal_fairness(const Dataset& data,
                                         const VariationalPosterior& post0,
                                         const VariationalPosterior& post1,
                                         std::size_t n_draws, std::uint64_t seed) {
    if (n_draws < 1) throw ValidationError("assess: number of draws must be >= 1");
    const Eigen::MatrixXd design = model_features(data);
    if (post0.dim() != design.cols() || post1.dim() != design.cols())
        throw ValidationError("assess: posterior has " + std::to_string(post0.dim()) +
                              " coordinates, model layout needs " +
                              std::to_string(design.cols()));

    std::vector<DeltaByStratum> per_draw;
    per_draw.reserve(n_draws);
    for (std::size_t s = 0; s < n_draws; ++s) {
        const Eigen::VectorXd theta0 =
            sample_parameters(post0, derive_seed(seed, stream::kAssessTheta0, s));
        const Eigen::VectorXd theta1 =
            sample_parameters(post1, derive_seed(seed, stream::kAssessTheta1, s));
        const ImputedDraw draw = impute_draw(data, design, theta0, theta1,
                                             derive_seed(seed, stream::kAssessImpute, s), s);
        per_draw.push_back(delta_by_stratum(draw.strata, data.decision, data.attribute));
    }

    FairnessReport report = aggregate(data, per_draw);
    report.seed = seed;
    return report;
}

FairnessReport assess_with_strata(const Dataset& data,
                                  const std::vector<StratumLabel>& strata) {
    if (strata.size() != data.n_rows())
        throw ValidationError("assess_with_strata: strata length mismatch");
    const std::vector<DeltaByStratum> one{delta_by_stratum(strata, data.decision, data.attribute)};
    return aggregate(data, one);
}

StatisticalParity statistical_parity(const Dataset& data) {
    long rows[2] = {0, 0};
    long treated[2] = {0, 0};
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const auto a = static_cast<std::size_t>(data.attribute[i]);
        rows[a] += 1;
        treated[a] += data.decision[i];
    }
    StatisticalParity out;
    out.rate_a0 = ratio(treated[0], rows[0]);
    out.rate_a1 = ratio(treated[1], rows[1]);
    if (out.rate_a0 && out.rate_a1) out.gap = *out.rate_a1 - *out.rate_a0;
    return out;
}

CalibrationTable calibration(const Dataset& data) {
    long rows[2][2] = {};
    long events[2][2] = {};
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const auto d = static_cast<std::size_t>(data.decision[i]);
        const auto a = static_cast<std::size_t>(data.attribute[i]);
        rows[d][a] += 1;
        events[d][a] += data.outcome[i];
    }
    CalibrationTable out;
    for (int d = 0; d < 2; ++d)
        for (int a = 0; a < 2; ++a)
            out[static_cast<std::size_t>(d)][static_cast<std::size_t>(a)] =
                ratio(events[d][a], rows[d][a]);
    return out;
}

AccuracyTable accuracy_metric(const Dataset& data) {
    long rows[2][2] = {};
    long treated[2][2] = {};
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const auto y = static_cast<std::size_t>(data.outcome[i]);
        const auto a = static_cast<std::size_t>(data.attribute[i]);
        rows[y][a] += 1;
        treated[y][a] += data.decision[i];
    }
    AccuracyTable out;
    for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
            out[static_cast<std::size_t>(y)][static_cast<std::size_t>(a)] =
                ratio(treated[y][a], rows[y][a]);
    return out;
}

} // namespace pfaudit
