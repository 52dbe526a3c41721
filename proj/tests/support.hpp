// Test-only oracles, kept independent of the library's computation paths:
// plain-loop reference densities, Gauss-Hermite quadrature for the model
// evidence, a random-walk Metropolis sampler, and small data generators.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "pfaudit/dataset.hpp"

namespace support {

// Reference log joint density (prior N(0, prior_std^2) + Bernoulli-logit
// likelihood), written with scalar loops and its own stable log1p form.
double ref_log_joint(const std::vector<double>& theta,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<int>& labels, double prior_std);

struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights; // for integrals against exp(-x^2)
};

// Golub-Welsch nodes/weights for physicists' Hermite quadrature.
GaussHermite gauss_hermite(int n);

// log of the model evidence  integral p(y|theta) N(theta; 0, prior_std^2 I)
// dtheta  by tensor-product Gauss-Hermite; dimension = theta size <= 3.
double log_evidence_quadrature(const std::vector<std::vector<double>>& rows,
                               const std::vector<int>& labels, double prior_std,
                               int nodes_per_dim = 64);

struct McmcSummary {
    std::vector<double> mean;
    std::vector<double> sd;
    double acceptance_rate = 0.0;
};

// Random-walk Metropolis on ref_log_joint; long-run posterior oracle for
// small problems.
McmcSummary metropolis(const std::vector<std::vector<double>>& rows,
                       const std::vector<int>& labels, double prior_std,
                       std::size_t n_iter, std::size_t burn_in, double step_scale,
                       std::uint64_t seed);

// Two-proportion standard error for a difference of independent rates.
double two_proportion_se(double p1, long n1, double p0, long n0);

// A valid random Dataset for property tests (both arms guaranteed).
pfaudit::Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t m);

// Rolling mean with a trailing window; out[i] covers points [i-w+1, i].
std::vector<double> rolling_mean(const std::vector<double>& values, std::size_t window);

} // namespace support
