#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fairbound/core.hpp"
#include "fairbound/rng.hpp"

namespace fairbound::divergence {

struct DiscretePmf {
    std::vector<double> masses;

    // masses >= 0, sum = 1 within 1e-12
    void validate() const;
};

/// (1/2) * sum_k |p_k - q_k|
double exact_tv_discrete(const DiscretePmf& p, const DiscretePmf& q);

/// Two-layer critic: elementwise logistic hidden layer, logistic output
/// shifted onto (-1/2, 1/2). The estimator always uses 10 hidden units;
/// smaller nets are allowed for hand-checkable fixtures.
struct CriticNetwork {
    static constexpr std::size_t kDefaultHidden = 10;

    std::size_t input_dim = 0;
    std::size_t hidden_dim = kDefaultHidden;
    core::Matrix w1;        // hidden x d
    std::vector<double> b1; // hidden
    std::vector<double> w2; // hidden (single output unit)
    double b2 = 0.0;

    static CriticNetwork zeros(std::size_t input_dim,
                               std::size_t hidden_dim = kDefaultHidden);
    static CriticNetwork random_init(std::size_t input_dim, double init_scale,
                                     SeededRng& rng,
                                     std::size_t hidden_dim = kDefaultHidden);
};

/// Gradient with the same shapes as the network parameters.
struct CriticGradient {
    core::Matrix w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
};

/// sigma(w2 . sigma(w1 x + b1) + b2) - 1/2, always in (-1/2, 1/2)
double critic_forward(const CriticNetwork& net, const double* x, std::size_t d);
double critic_forward(const CriticNetwork& net, const std::vector<double>& x);

/// mean_P T - mean_Q T. The shifted-sigmoid output keeps the critic inside
/// the conjugate domain of TV, so no penalty term is needed.
double tv_objective(const CriticNetwork& net, const core::Matrix& samples_p,
                    const core::Matrix& samples_q);

/// Exact analytic gradient of tv_objective with respect to every parameter.
CriticGradient critic_gradient(const CriticNetwork& net, const core::Matrix& samples_p,
                               const core::Matrix& samples_q);

struct EstimatorConfig {
    double learning_rate = 0.1;
    int max_iters = 5000;
    std::uint64_t seed = 0;
    double init_scale = 0.1;
    static constexpr const char* batch = "full-batch";

    void validate() const;
};

struct TvEstimate {
    double value = 0.0; // max of the trace, clamped to [0,1]
    int iterations_run = 0;
    std::vector<double> final_objective_trace; // one entry per iteration
    std::uint64_t seed = 0;
    std::pair<std::size_t, std::size_t> sample_sizes{0, 0};
};

/// Full-batch gradient ascent on the empirical variational objective from
/// a seeded uniform initialization. Inputs are standardized per feature
/// (pooled mean/std) before training. Deterministic given (inputs, seed).
TvEstimate estimate_tv_variational(const core::Matrix& samples_p,
                                   const core::Matrix& samples_q,
                                   const EstimatorConfig& cfg);

} // namespace fairbound::divergence
