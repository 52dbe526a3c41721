#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace support {

namespace {

double ref_log1p_exp(double x) {
    // log(1 + e^x) without overflow
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

} // namespace

double ref_log_joint(const std::vector<double>& theta,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels, double prior_std) {
    const double log2pi = std::log(2.0 * M_PI);
    double lp = 0.0;
    for (double t : theta)
        lp += -0.5 * log2pi - std::log(prior_std) - 0.5 * (t / prior_std) * (t / prior_std);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double eta = 0.0;
        for (std::size_t j = 0; j < theta.size(); ++j) eta += rows[i][j] * theta[j];
        // y*log sigmoid(eta) + (1-y)*log sigmoid(-eta) = y*eta - log(1+e^eta)
        lp += labels[i] * eta - ref_log1p_exp(eta);
    }
    return lp;
}

GaussHermite gauss_hermite(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double off = std::sqrt(k / 2.0);
        jacobi(k, k - 1) = off;
        jacobi(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    GaussHermite out;
    out.nodes.resize(n);
    out.weights.resize(n);
    const double sqrt_pi = std::sqrt(M_PI);
    for (int i = 0; i < n; ++i) {
        out.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        out.weights[i] = sqrt_pi * v0 * v0;
    }
    return out;
}

double log_evidence_quadrature(const std::vector<std::vector<double>>& rows,
                               const std::vector<int>& labels, double prior_std,
                               int nodes_per_dim) {
    const std::size_t dim = rows.empty() ? 0 : rows.front().size();
    if (dim == 0 || dim > 3) throw std::runtime_error("quadrature oracle supports 1..3 dims");
    const GaussHermite gh = gauss_hermite(nodes_per_dim);
    const double log_sqrt_pi = 0.5 * std::log(M_PI);

    // E_{N(0, s^2 I)}[lik] via theta_j = sqrt(2) * s * x_{i_j}; accumulate
    // log(weight product) + loglik with a streaming log-sum-exp.
    std::vector<int> idx(dim, 0);
    std::vector<double> theta(dim);
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(std::pow(nodes_per_dim, static_cast<int>(dim))));
    while (true) {
        double log_w = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            theta[j] = std::sqrt(2.0) * prior_std * gh.nodes[static_cast<std::size_t>(idx[j])];
            log_w += std::log(gh.weights[static_cast<std::size_t>(idx[j])]) - log_sqrt_pi;
        }
        double loglik = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double eta = 0.0;
            for (std::size_t j = 0; j < dim; ++j) eta += rows[i][j] * theta[j];
            loglik += labels[i] * eta - ref_log1p_exp(eta);
        }
        const double term = log_w + loglik;
        terms.push_back(term);
        max_term = std::max(max_term, term);

        std::size_t j = 0;
        for (; j < dim; ++j) {
            if (++idx[j] < nodes_per_dim) break;
            idx[j] = 0;
        }
        if (j == dim) break;
    }
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - max_term);
    return max_term + std::log(sum);
}

McmcSummary metropolis(const std::vector<std::vector<double>>& rows,
                       const std::vector<int>& labels, double prior_std,
                       std::size_t n_iter, std::size_t burn_in, double step_scale,
                       std::uint64_t seed) {
    const std::size_t dim = rows.empty() ? 0 : rows.front().size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<double> theta(dim, 0.0);
    double log_p = ref_log_joint(theta, rows, labels, prior_std);
    std::vector<double> sum(dim, 0.0), sum_sq(dim, 0.0);
    std::size_t kept = 0, accepted = 0;

    std::vector<double> proposal(dim);
    for (std::size_t it = 0; it < n_iter; ++it) {
        for (std::size_t j = 0; j < dim; ++j) proposal[j] = theta[j] + step_scale * gauss(rng);
        const double log_p_new = ref_log_joint(proposal, rows, labels, prior_std);
        if (std::log(unif(rng)) < log_p_new - log_p) {
            theta = proposal;
            log_p = log_p_new;
            ++accepted;
        }
        if (it >= burn_in) {
            for (std::size_t j = 0; j < dim; ++j) {
                sum[j] += theta[j];
                sum_sq[j] += theta[j] * theta[j];
            }
            ++kept;
        }
    }

    McmcSummary out;
    out.mean.resize(dim);
    out.sd.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        out.mean[j] = sum[j] / static_cast<double>(kept);
        const double var = sum_sq[j] / static_cast<double>(kept) - out.mean[j] * out.mean[j];
        out.sd[j] = std::sqrt(std::max(var, 0.0));
    }
    out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(n_iter);
    return out;
}

double two_proportion_se(double p1, long n1, double p0, long n0) {
    return std::sqrt(p1 * (1.0 - p1) / static_cast<double>(n1) +
                     p0 * (1.0 - p0) / static_cast<double>(n0));
}

pfaudit::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    if (n < 2) throw std::runtime_error("random_dataset needs n >= 2");
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> gauss(0.0, 1.0);

    pfaudit::Dataset data;
    data.decision.resize(n);
    data.attribute.resize(n);
    data.outcome.resize(n);
    data.covariates.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < n; ++i) {
        data.decision[i] = coin(rng) ? 1 : 0;
        data.attribute[i] = coin(rng) ? 1 : 0;
        data.outcome[i] = coin(rng) ? 1 : 0;
        for (std::size_t j = 0; j < m; ++j)
            data.covariates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                gauss(rng);
    }
    // guarantee overlap
    data.decision[0] = 1;
    data.decision[1] = 0;
    for (std::size_t j = 0; j < m; ++j)
        data.covariate_names.push_back("X" + std::to_string(j + 1));
    return data;
}

std::vector<double> rolling_mean(const std::vector<double>& values, std::size_t window) {
    std::vector<double> out;
    if (values.size() < window || window == 0) return out;
    out.reserve(values.size() - window + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += values[i];
        if (i >= window) sum -= values[i - window];
        if (i + 1 >= window) out.push_back(sum / static_cast<double>(window));
    }
    return out;
}

} // namespace support
