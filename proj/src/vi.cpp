#include "pfaudit/vi.hpp"

#include <cmath>
#include <random>

namespace pfaudit {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178; // 0.5*log(2*pi)

void check_design(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels,
                  Eigen::Index dim, double prior_std) {
    if (features.cols() != dim)
        throw ValidationError("feature count " + std::to_string(features.cols()) +
                              " does not match parameter count " + std::to_string(dim));
    if (features.rows() != labels.size())
        throw ValidationError("row count mismatch: " + std::to_string(features.rows()) +
                              " feature rows vs " + std::to_string(labels.size()) + " labels");
    if (!(prior_std > 0.0) || !std::isfinite(prior_std))
        throw ValidationError("prior_std must be positive and finite");
    for (Eigen::Index i = 0; i < labels.size(); ++i)
        if (labels(i) != 0.0 && labels(i) != 1.0)
            throw ValidationError("labels must be 0/1; found " + format_double(labels(i)) +
                                  " at row " + std::to_string(i));
}

// eps matrix for the reparameterization trick; depends only on
// (seed, n_draws, dim). Row s is the noise vector of draw s.
Eigen::MatrixXd standard_normal_draws(std::size_t n_draws, Eigen::Index dim,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd eps(static_cast<Eigen::Index>(n_draws), dim);
    for (Eigen::Index s = 0; s < eps.rows(); ++s)
        for (Eigen::Index j = 0; j < dim; ++j) eps(s, j) = gauss(rng);
    return eps;
}

struct ElboBatch {
    std::vector<double> draws;    // per-draw ELBO values
    Eigen::VectorXd grad;         // length 2p, [d/dmu; d/dlog_sigma]
};

// Shared implementation behind elbo_draws / elbo_estimate / elbo_gradient:
// one batched pass computes both the per-draw values and the
// reparameterized gradient from the same eps draws.
ElboBatch elbo_batch(const VariationalPosterior& post, const Eigen::MatrixXd& features,
                     const Eigen::VectorXd& labels, double prior_std,
                     std::size_t n_draws, std::uint64_t seed) {
    const Eigen::Index p = post.dim();
    if (post.log_sigma.size() != p)
        throw ValidationError("posterior mu/log_sigma length mismatch");
    if (!post.mu.allFinite() || !post.log_sigma.allFinite())
        throw ValidationError("posterior parameters must be finite");
    if (n_draws < 1) throw ValidationError("n_draws must be >= 1");
    check_design(features, labels, p, prior_std);

    const Eigen::VectorXd sigma = post.sigma();
    const Eigen::MatrixXd eps = standard_normal_draws(n_draws, p, seed);
    const auto S = eps.rows();
    const auto n = features.rows();

    // theta_s = mu + sigma .* eps_s, one draw per row.
    Eigen::MatrixXd theta = eps * sigma.asDiagonal();
    theta.rowwise() += post.mu.transpose();

    const double inv_var = 1.0 / (prior_std * prior_std);
    ElboBatch out;
    out.draws.resize(n_draws);

    Eigen::MatrixXd eta = theta * features.transpose(); // S x n
    Eigen::MatrixXd resid(S, n);                        // y - sigmoid(eta)
    Eigen::VectorXd loglik = Eigen::VectorXd::Zero(S);
    for (Eigen::Index s = 0; s < S; ++s) {
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double e = eta(s, i);
            const double y = labels(i);
            ll += y * log_sigmoid(e) + (1.0 - y) * log_sigmoid(-e);
            resid(s, i) = y - sigmoid(e);
        }
        loglik(s) = ll;
    }

    // d log_joint / d theta per draw: -theta/prior_var + F^T residual.
    Eigen::MatrixXd grad_theta = resid * features; // S x p
    grad_theta -= theta * inv_var;

    const double log_prior_const = -kHalfLog2Pi - std::log(prior_std);
    for (Eigen::Index s = 0; s < S; ++s) {
        const double log_prior =
            static_cast<double>(p) * log_prior_const -
            0.5 * inv_var * theta.row(s).squaredNorm();
        double log_q = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const double z = (theta(s, j) - post.mu(j)) / sigma(j);
            log_q += -kHalfLog2Pi - post.log_sigma(j) - 0.5 * z * z;
        }
        out.draws[static_cast<std::size_t>(s)] = loglik(s) + log_prior - log_q;
    }

    out.grad.resize(2 * p);
    out.grad.head(p) = grad_theta.colwise().mean();
    // Pathwise term through sigma plus the closed-form entropy gradient.
    out.grad.tail(p) =
        ((grad_theta.array() * eps.array()).colwise().mean().transpose() * sigma.array() + 1.0)
            .matrix();
    return out;
}

} // namespace

double log_joint(const Eigen::VectorXd& theta, const Eigen::MatrixXd& features,
                 const Eigen::VectorXd& labels, double prior_std) {
    check_design(features, labels, theta.size(), prior_std);
    const double inv_var = 1.0 / (prior_std * prior_std);
    double lp = static_cast<double>(theta.size()) * (-kHalfLog2Pi - std::log(prior_std)) -
                0.5 * inv_var * theta.squaredNorm();
    const Eigen::VectorXd eta = features * theta;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        lp += labels(i) * log_sigmoid(eta(i)) + (1.0 - labels(i)) * log_sigmoid(-eta(i));
    return lp;
}

Eigen::VectorXd log_joint_gradient(const Eigen::VectorXd& theta,
                                   const Eigen::MatrixXd& features,
                                   const Eigen::VectorXd& labels, double prior_std) {
    check_design(features, labels, theta.size(), prior_std);
    const Eigen::VectorXd eta = features * theta;
    Eigen::VectorXd resid(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) resid(i) = labels(i) - sigmoid(eta(i));
    return features.transpose() * resid - theta / (prior_std * prior_std);
}

std::vector<double> elbo_draws(const VariationalPosterior& post,
                               const Eigen::MatrixXd& features,
                               const Eigen::VectorXd& labels, double prior_std,
                               std::size_t n_draws, std::uint64_t seed) {
    return elbo_batch(post, features, labels, prior_std, n_draws, seed).draws;
}

double elbo_estimate(const VariationalPosterior& post, const Eigen::MatrixXd& features,
                     const Eigen::VectorXd& labels, double prior_std,
                     std::size_t n_draws, std::uint64_t seed) {
    const auto draws = elbo_draws(post, features, labels, prior_std, n_draws, seed);
    double sum = 0.0;
    for (double v : draws) sum += v;
    return sum / static_cast<double>(draws.size());
}

Eigen::VectorXd elbo_gradient(const VariationalPosterior& post,
                              const Eigen::MatrixXd& features,
                              const Eigen::VectorXd& labels, double prior_std,
                              std::size_t n_draws, std::uint64_t seed) {
    return elbo_batch(post, features, labels, prior_std, n_draws, seed).grad;
}

std::pair<AdamState, Eigen::VectorXd> adam_step(const AdamState& state,
                                                const Eigen::VectorXd& params,
                                                const Eigen::VectorXd& grad,
                                                double learning_rate) {
    const Eigen::Index dim = params.size();
    if (grad.size() != dim || state.first_moment.size() != dim ||
        state.second_moment.size() != dim)
        throw ValidationError("adam_step: length mismatch between params, grad and moments");

    AdamState next = state;
    next.step_count = state.step_count + 1;
    next.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad;
    next.second_moment =
        (state.beta2 * state.second_moment.array() + (1.0 - state.beta2) * grad.array().square())
            .matrix();

    const auto t = static_cast<double>(next.step_count);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    const Eigen::VectorXd update =
        (learning_rate * (next.first_moment.array() / c1) /
         ((next.second_moment.array() / c2).sqrt() + state.epsilon))
            .matrix();
    return {std::move(next), params + update};
}

FitResult fit_bayes_logistic(const Eigen::MatrixXd& features,
                             const Eigen::VectorXd& labels, const FitConfig& cfg) {
    if (features.rows() < 1) throw ValidationError("fit requires at least one row");
    if (!(cfg.learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
    if (cfg.steps < 1) throw ValidationError("steps must be >= 1");
    if (cfg.mc_samples < 1) throw ValidationError("mc_samples must be >= 1");

    Eigen::MatrixXd design(features.rows(), features.cols() + 1);
    design.leftCols(features.cols()) = features;
    design.col(features.cols()).setOnes();
    const Eigen::Index p = design.cols();

    VariationalPosterior post{Eigen::VectorXd::Zero(p),
                              Eigen::VectorXd::Constant(p, std::log(0.1))};
    AdamState adam(2 * p);
    Eigen::VectorXd params(2 * p);
    params << post.mu, post.log_sigma;

    FitResult result;
    result.trace.reserve(cfg.steps);
    for (std::size_t t = 0; t < cfg.steps; ++t) {
        const std::uint64_t step_seed = derive_seed(cfg.seed, stream::kFitStep, t);
        auto batch = elbo_batch(post, design, labels, cfg.prior_std, cfg.mc_samples, step_seed);
        double elbo = 0.0;
        for (double v : batch.draws) elbo += v;
        elbo /= static_cast<double>(batch.draws.size());
        if (!std::isfinite(elbo) || !batch.grad.allFinite())
            throw NumericError("non-finite ELBO or gradient at step " + std::to_string(t));
        result.trace.push_back({t, elbo});
        std::tie(adam, params) = adam_step(adam, params, batch.grad, cfg.learning_rate);
        post.mu = params.head(p);
        post.log_sigma = params.tail(p);
    }
    result.final_elbo = result.trace.back().elbo;
    result.posterior = std::move(post);
    return result;
}

Eigen::VectorXd sample_parameters(const VariationalPosterior& post, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Eigen::VectorXd sigma = post.sigma();
    Eigen::VectorXd theta(post.dim());
    for (Eigen::Index j = 0; j < theta.size(); ++j)
        theta(j) = post.mu(j) + sigma(j) * gauss(rng);
    return theta;
}

double predict_prob(const Eigen::VectorXd& theta, const Eigen::VectorXd& features_row) {
    if (theta.size() != features_row.size())
        throw ValidationError("predict_prob: length mismatch (" + std::to_string(theta.size()) +
                              " vs " + std::to_string(features_row.size()) + ")");
    return sigmoid(theta.dot(features_row));
}

} // namespace pfaudit
