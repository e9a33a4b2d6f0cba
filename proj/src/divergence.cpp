#include "fairbound/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fairbound::divergence {

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

} // namespace

void DiscretePmf::validate() const {
    double total = 0.0;
    for (double m : masses) {
        if (m < 0.0) throw std::invalid_argument("pmf mass must be nonnegative");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("pmf masses must sum to 1");
}

double exact_tv_discrete(const DiscretePmf& p, const DiscretePmf& q) {
    if (p.masses.size() != q.masses.size())
        throw std::invalid_argument("pmf length mismatch");
    p.validate();
    q.validate();
    double l1 = 0.0;
    for (std::size_t k = 0; k < p.masses.size(); ++k)
        l1 += std::abs(p.masses[k] - q.masses[k]);
    return 0.5 * l1;
}

CriticNetwork CriticNetwork::zeros(std::size_t input_dim, std::size_t hidden_dim) {
    CriticNetwork net;
    net.input_dim = input_dim;
    net.hidden_dim = hidden_dim;
    net.w1 = core::Matrix(hidden_dim, input_dim, 0.0);
    net.b1.assign(hidden_dim, 0.0);
    net.w2.assign(hidden_dim, 0.0);
    net.b2 = 0.0;
    return net;
}

CriticNetwork CriticNetwork::random_init(std::size_t input_dim, double init_scale,
                                         SeededRng& rng, std::size_t hidden_dim) {
    CriticNetwork net = zeros(input_dim, hidden_dim);
    for (double& v : net.w1.values) v = rng.next_uniform(-init_scale, init_scale);
    for (double& v : net.b1) v = rng.next_uniform(-init_scale, init_scale);
    for (double& v : net.w2) v = rng.next_uniform(-init_scale, init_scale);
    net.b2 = rng.next_uniform(-init_scale, init_scale);
    return net;
}

namespace {

// Forward pass storing hidden activations; `hidden` must have
// net.hidden_dim slots.
double forward_with_hidden(const CriticNetwork& net, const double* x, double* hidden) {
    double pre = net.b2;
    for (std::size_t j = 0; j < net.hidden_dim; ++j) {
        double a = net.b1[j];
        const double* wrow = net.w1.row(j);
        for (std::size_t k = 0; k < net.input_dim; ++k) a += wrow[k] * x[k];
        const double h = sigmoid(a);
        hidden[j] = h;
        pre += net.w2[j] * h;
    }
    return sigmoid(pre) - 0.5;
}

void check_samples(const CriticNetwork& net, const core::Matrix& samples_p,
                   const core::Matrix& samples_q) {
    if (samples_p.rows == 0 || samples_q.rows == 0)
        throw std::invalid_argument("empty sample set");
    if (samples_p.cols != net.input_dim || samples_q.cols != net.input_dim)
        throw std::invalid_argument("sample dimension does not match critic");
}

// One side of the objective: accumulates sign/n * d(T)/d(theta) into grad
// and returns mean T over the samples.
double accumulate_side(const CriticNetwork& net, const core::Matrix& samples, double sign,
                       CriticGradient* grad, std::vector<double>& hidden_buf) {
    const double inv_n = 1.0 / static_cast<double>(samples.rows);
    double mean_t = 0.0;
    for (std::size_t i = 0; i < samples.rows; ++i) {
        const double* x = samples.row(i);
        const double out = forward_with_hidden(net, x, hidden_buf.data());
        mean_t += out * inv_n;
        if (!grad) continue;
        // d(out)/d(pre) for the shifted sigmoid output
        const double s_out = out + 0.5;
        const double dpre = s_out * (1.0 - s_out) * sign * inv_n;
        grad->b2 += dpre;
        for (std::size_t j = 0; j < net.hidden_dim; ++j) {
            const double h = hidden_buf[j];
            grad->w2[j] += dpre * h;
            const double dh = dpre * net.w2[j] * h * (1.0 - h);
            grad->b1[j] += dh;
            double* grow = grad->w1.row(j);
            for (std::size_t k = 0; k < net.input_dim; ++k) grow[k] += dh * x[k];
        }
    }
    return mean_t;
}

double objective_impl(const CriticNetwork& net, const core::Matrix& samples_p,
                      const core::Matrix& samples_q, CriticGradient* grad) {
    check_samples(net, samples_p, samples_q);
    std::vector<double> hidden(net.hidden_dim);
    const double mean_p = accumulate_side(net, samples_p, +1.0, grad, hidden);
    const double mean_q = accumulate_side(net, samples_q, -1.0, grad, hidden);
    return mean_p - mean_q;
}

} // namespace

double critic_forward(const CriticNetwork& net, const double* x, std::size_t d) {
    if (d != net.input_dim)
        throw std::invalid_argument("input dimension does not match critic");
    std::vector<double> hidden(net.hidden_dim);
    return forward_with_hidden(net, x, hidden.data());
}

double critic_forward(const CriticNetwork& net, const std::vector<double>& x) {
    return critic_forward(net, x.data(), x.size());
}

double tv_objective(const CriticNetwork& net, const core::Matrix& samples_p,
                    const core::Matrix& samples_q) {
    return objective_impl(net, samples_p, samples_q, nullptr);
}

CriticGradient critic_gradient(const CriticNetwork& net, const core::Matrix& samples_p,
                               const core::Matrix& samples_q) {
    CriticGradient grad;
    grad.w1 = core::Matrix(net.hidden_dim, net.input_dim, 0.0);
    grad.b1.assign(net.hidden_dim, 0.0);
    grad.w2.assign(net.hidden_dim, 0.0);
    grad.b2 = 0.0;
    objective_impl(net, samples_p, samples_q, &grad);
    return grad;
}

void EstimatorConfig::validate() const {
    if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be positive");
    if (max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
    if (init_scale <= 0.0) throw std::invalid_argument("init_scale must be positive");
}

namespace {

// Zero-mean unit-variance per feature, statistics pooled over both sample
// sets. Unscaled features stall sigmoid critics.
void standardize_pooled(core::Matrix& sp, core::Matrix& sq) {
    const std::size_t d = sp.cols;
    const double n = static_cast<double>(sp.rows + sq.rows);
    for (std::size_t k = 0; k < d; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < sp.rows; ++i) sum += sp(i, k);
        for (std::size_t i = 0; i < sq.rows; ++i) sum += sq(i, k);
        const double mean = sum / n;
        double ss = 0.0;
        for (std::size_t i = 0; i < sp.rows; ++i) ss += (sp(i, k) - mean) * (sp(i, k) - mean);
        for (std::size_t i = 0; i < sq.rows; ++i) ss += (sq(i, k) - mean) * (sq(i, k) - mean);
        const double sd = std::sqrt(ss / n);
        const double scale = sd > 1e-12 ? 1.0 / sd : 1.0;
        for (std::size_t i = 0; i < sp.rows; ++i) sp(i, k) = (sp(i, k) - mean) * scale;
        for (std::size_t i = 0; i < sq.rows; ++i) sq(i, k) = (sq(i, k) - mean) * scale;
    }
}

} // namespace

TvEstimate estimate_tv_variational(const core::Matrix& samples_p, const core::Matrix& samples_q,
                                   const EstimatorConfig& cfg) {
    cfg.validate();
    if (samples_p.rows == 0 || samples_q.rows == 0)
        throw std::invalid_argument("empty sample set");
    if (samples_p.cols != samples_q.cols)
        throw std::invalid_argument("sample dimension mismatch");

    core::Matrix sp = samples_p;
    core::Matrix sq = samples_q;
    standardize_pooled(sp, sq);

    SeededRng rng(cfg.seed);
    CriticNetwork net = CriticNetwork::random_init(sp.cols, cfg.init_scale, rng);

    TvEstimate est;
    est.seed = cfg.seed;
    est.sample_sizes = {sp.rows, sq.rows};
    est.final_objective_trace.reserve(static_cast<std::size_t>(cfg.max_iters));

    double best = -1.0;
    CriticGradient grad;
    grad.w1 = core::Matrix(net.hidden_dim, net.input_dim, 0.0);
    grad.b1.assign(net.hidden_dim, 0.0);
    grad.w2.assign(net.hidden_dim, 0.0);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        std::fill(grad.w1.values.begin(), grad.w1.values.end(), 0.0);
        std::fill(grad.b1.begin(), grad.b1.end(), 0.0);
        std::fill(grad.w2.begin(), grad.w2.end(), 0.0);
        grad.b2 = 0.0;

        const double obj = objective_impl(net, sp, sq, &grad);
        if (!std::isfinite(obj))
            throw std::runtime_error("estimator diverged at iteration " + std::to_string(iter));
        est.final_objective_trace.push_back(obj);
        if (obj > best) best = obj;

        const double lr = cfg.learning_rate;
        for (std::size_t idx = 0; idx < net.w1.values.size(); ++idx)
            net.w1.values[idx] += lr * grad.w1.values[idx];
        for (std::size_t j = 0; j < net.hidden_dim; ++j) {
            net.b1[j] += lr * grad.b1[j];
            net.w2[j] += lr * grad.w2[j];
        }
        net.b2 += lr * grad.b2;
    }

    est.iterations_run = cfg.max_iters;
    est.value = std::clamp(best, 0.0, 1.0);
    return est;
}

} // namespace fairbound::divergence
