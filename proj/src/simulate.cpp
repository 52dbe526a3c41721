#include "pfaudit/simulate.hpp"

#include <random>

#include "pfaudit/csv.hpp"

namespace pfaudit {

void check_sim_config(const SimConfig& config) {
    if (config.n < 1) throw ValidationError("sim config: n must be >= 1");
    if (config.m < 1) throw ValidationError("sim config: m must be >= 1");
    if (!std::isfinite(config.theta_d)) throw ValidationError("sim config: theta_d not finite");
    for (auto h : kAllStrata) {
        for (int a = 0; a < 2; ++a) {
            const double p = config.decision_prob[static_cast<std::size_t>(h)][static_cast<std::size_t>(a)];
            if (!(p >= 0.0 && p <= 1.0))
                throw ValidationError(std::string("sim config: p_{") + stratum_name(h) + "," +
                                      std::to_string(a) + "} outside [0,1]");
        }
    }
}

SimulatedDataset simulate(const SimConfig& config) {
    check_sim_config(config);
    const auto n = static_cast<Eigen::Index>(config.n);
    const auto m = static_cast<Eigen::Index>(config.m);

    SimulatedDataset sim;
    Dataset& data = sim.data;

    // Independent substreams per component: resizing one component's draw
    // count leaves the others untouched.
    std::mt19937_64 rng_a(derive_seed(config.seed, stream::kSimAttribute));
    std::mt19937_64 rng_x(derive_seed(config.seed, stream::kSimCovariates));
    std::mt19937_64 rng_w(derive_seed(config.seed, stream::kSimWeights));
    std::mt19937_64 rng_y(derive_seed(config.seed, stream::kSimOutcomes));
    std::mt19937_64 rng_d(derive_seed(config.seed, stream::kSimDecisions));

    data.attribute.resize(config.n);
    {
        std::bernoulli_distribution coin(0.5);
        for (auto& a : data.attribute) a = coin(rng_a) ? 1 : 0;
    }

    data.covariates.resize(n, m);
    {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < m; ++j) data.covariates(i, j) = gauss(rng_x);
    }
    data.covariate_names.resize(config.m);
    for (std::size_t j = 0; j < config.m; ++j)
        data.covariate_names[j] = "X" + std::to_string(j + 1);

    sim.weights0.resize(m);
    sim.weights1.resize(m);
    {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (Eigen::Index j = 0; j < m; ++j) sim.weights0(j) = gauss(rng_w);
        for (Eigen::Index j = 0; j < m; ++j) sim.weights1(j) = gauss(rng_w);
    }

    const Eigen::VectorXd logit0 = data.covariates * sim.weights0;
    const Eigen::VectorXd logit1 =
        (data.covariates * sim.weights1).array() + config.theta_d;

    sim.truth.y0.resize(config.n);
    sim.truth.y1.resize(config.n);
    sim.truth.source_y0.assign(config.n, PotentialOutcomes::Source::Observed);
    sim.truth.source_y1.assign(config.n, PotentialOutcomes::Source::Observed);
    sim.strata.resize(config.n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        std::bernoulli_distribution b0(sigmoid(logit0(i)));
        sim.truth.y0[ui] = b0(rng_y) ? 1 : 0;
        std::bernoulli_distribution b1(sigmoid(logit1(i)));
        sim.truth.y1[ui] = b1(rng_y) ? 1 : 0;
        sim.strata[ui] = stratum_from_outcomes(sim.truth.y0[ui], sim.truth.y1[ui]);
    }

    data.decision.resize(config.n);
    data.outcome.resize(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        const auto h = static_cast<std::size_t>(sim.strata[i]);
        const auto a = static_cast<std::size_t>(data.attribute[i]);
        std::bernoulli_distribution bd(config.decision_prob[h][a]);
        data.decision[i] = bd(rng_d) ? 1 : 0;
        data.outcome[i] = data.decision[i] == 1 ? sim.truth.y1[i] : sim.truth.y0[i];
    }

    return sim;
}

std::map<StratumLabel, double> true_delta(const SimConfig& config) {
    check_sim_config(config);
    std::map<StratumLabel, double> out;
    for (auto h : kAllStrata) {
        const auto& row = config.decision_prob[static_cast<std::size_t>(h)];
        out[h] = row[1] - row[0];
    }
    return out;
}

std::map<StratumLabel, std::optional<double>> oracle_delta(const SimulatedDataset& sim) {
    // Plain frequency counting; intentionally separate from the fairness
    // module's delta path so the two can cross-check each other.
    long count[4][2] = {};
    long treated[4][2] = {};
    const auto& data = sim.data;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const auto h = static_cast<std::size_t>(sim.strata[i]);
        const auto a = static_cast<std::size_t>(data.attribute[i]);
        count[h][a] += 1;
        treated[h][a] += data.decision[i];
    }
    std::map<StratumLabel, std::optional<double>> out;
    for (auto h : kAllStrata) {
        const auto hi = static_cast<std::size_t>(h);
        if (count[hi][0] == 0 || count[hi][1] == 0) {
            out[h] = std::nullopt;
        } else {
            out[h] = static_cast<double>(treated[hi][1]) / static_cast<double>(count[hi][1]) -
                     static_cast<double>(treated[hi][0]) / static_cast<double>(count[hi][0]);
        }
    }
    return out;
}

std::string truth_to_csv(const SimulatedDataset& sim, const std::vector<std::string>& provenance) {
    std::string out;
    for (const auto& note : provenance) out += "# " + note + "\n";
    out += "y0,y1,stratum_code\n";
    for (std::size_t i = 0; i < sim.data.n_rows(); ++i) {
        out += std::to_string(sim.truth.y0[i]);
        out += ',';
        out += std::to_string(sim.truth.y1[i]);
        out += ',';
        out += std::to_string(static_cast<int>(sim.strata[i]));
        out += '\n';
    }
    return out;
}

void write_truth_csv(const std::string& path, const SimulatedDataset& sim,
                     const std::vector<std::string>& provenance) {
    write_text_file(path, truth_to_csv(sim, provenance));
}

} // namespace pfaudit
