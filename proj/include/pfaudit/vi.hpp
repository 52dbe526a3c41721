#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pfaudit/common.hpp"

namespace pfaudit {

// Mean-field Gaussian over a logistic regression weight vector:
// q(theta_j) = N(mu_j, exp(log_sigma_j)^2), independent across j.
struct VariationalPosterior {
    Eigen::VectorXd mu;
    Eigen::VectorXd log_sigma;

    Eigen::Index dim() const { return mu.size(); }
    Eigen::VectorXd sigma() const { return log_sigma.array().exp(); }
};

struct FitConfig {
    double prior_std = 1.0;
    double learning_rate = 0.01;
    std::size_t steps = 3000;
    std::size_t mc_samples = 8;
    std::uint64_t seed = 0;
};

struct AdamState {
    Eigen::VectorXd first_moment;
    Eigen::VectorXd second_moment;
    std::size_t step_count = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(Eigen::Index dim)
        : first_moment(Eigen::VectorXd::Zero(dim)),
          second_moment(Eigen::VectorXd::Zero(dim)) {}
};

// log p(theta) + log p(y | theta, features) with a N(0, prior_std^2)
// prior per coordinate and a numerically stable Bernoulli log-likelihood.
// features must include every model column (intercept included if the
// model has one); features.cols() == theta.size().
double log_joint(const Eigen::VectorXd& theta, const Eigen::MatrixXd& features,
                 const Eigen::VectorXd& labels, double prior_std);

// Gradient of log_joint with respect to theta.
Eigen::VectorXd log_joint_gradient(const Eigen::VectorXd& theta,
                                   const Eigen::MatrixXd& features,
                                   const Eigen::VectorXd& labels, double prior_std);

// Per-draw values log_joint(theta_s) - log q(theta_s) with
// theta_s = mu + sigma * eps_s. The eps draws depend only on
// (seed, n_draws, dim), which is what makes common-random-number
// comparisons across parameter settings work.
std::vector<double> elbo_draws(const VariationalPosterior& post,
                               const Eigen::MatrixXd& features,
                               const Eigen::VectorXd& labels, double prior_std,
                               std::size_t n_draws, std::uint64_t seed);

// Monte Carlo ELBO estimate: mean of elbo_draws.
double elbo_estimate(const VariationalPosterior& post, const Eigen::MatrixXd& features,
                     const Eigen::VectorXd& labels, double prior_std,
                     std::size_t n_draws, std::uint64_t seed);

// Reparameterized gradient of the ELBO with respect to (mu, log_sigma),
// flattened [d/dmu; d/dlog_sigma], using the same draws as elbo_draws for
// the given seed. The entropy contribution to d/dlog_sigma_j is its
// closed form, 1.
Eigen::VectorXd elbo_gradient(const VariationalPosterior& post,
                              const Eigen::MatrixXd& features,
                              const Eigen::VectorXd& labels, double prior_std,
                              std::size_t n_draws, std::uint64_t seed);

// One bias-corrected Adam ascent step; returns the new state and params.
std::pair<AdamState, Eigen::VectorXd> adam_step(const AdamState& state,
                                                const Eigen::VectorXd& params,
                                                const Eigen::VectorXd& grad,
                                                double learning_rate);

struct FitTracePoint {
    std::size_t step;
    double elbo;
};

struct FitResult {
    VariationalPosterior posterior;
    std::vector<FitTracePoint> trace; // ELBO estimate per step, before the update
    double final_elbo = 0.0;
};

// Fits the mean-field posterior by cfg.steps Adam steps from mu = 0,
// sigma = 0.1. An intercept column is appended internally, so the
// returned posterior has features.cols() + 1 coordinates. Aborts with a
// NumericError naming the step index if the ELBO or gradient goes
// non-finite.
FitResult fit_bayes_logistic(const Eigen::MatrixXd& features,
                             const Eigen::VectorXd& labels, const FitConfig& cfg);

// One draw theta = mu + sigma * eps from the posterior.
Eigen::VectorXd sample_parameters(const VariationalPosterior& post, std::uint64_t seed);

// sigmoid(theta . x), clamped inside (0,1); lengths must match.
double predict_prob(const Eigen::VectorXd& theta, const Eigen::VectorXd& features_row);

} // namespace pfaudit
