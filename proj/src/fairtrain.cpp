#include "fairbound/fairtrain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fairbound/rng.hpp"

namespace fairbound::fairtrain {

using core::Group;
using core::LabeledDataset;

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct CellIndex {
    std::vector<std::size_t> idx[2][2]; // [y][z]

    static CellIndex build(const LabeledDataset& data) {
        CellIndex cells;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const int y = data.labels[i];
            if (y != 0 && y != 1) throw std::invalid_argument("invalid alphabet");
            cells.idx[y][static_cast<int>(data.groups[i])].push_back(i);
        }
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                if (cells.idx[y][z].empty())
                    throw std::runtime_error(
                        std::string("undefined conditional rate: cell (y=") + std::to_string(y) +
                        ", z=" + core::group_name(static_cast<Group>(z)) + ") is empty");
        return cells;
    }
};

std::vector<double> margins(const ClassifierModel& model, const LabeledDataset& data) {
    if (model.weights.size() != data.dim())
        throw std::invalid_argument("model dimension does not match dataset");
    std::vector<double> m(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double* x = data.features.row(i);
        double acc = model.bias;
        for (std::size_t k = 0; k < data.dim(); ++k) acc += model.weights[k] * x[k];
        m[i] = acc;
    }
    return m;
}

double cell_mean_score(const std::vector<double>& scores, const std::vector<std::size_t>& idx) {
    double total = 0.0;
    for (std::size_t i : idx) total += scores[i];
    return total / static_cast<double>(idx.size());
}

// dR/d(score_i) for the two mean-gap regularizers; both reduce to signed
// per-cell weights on the scores.
void add_mean_gap_grad(std::vector<double>& dscore, const CellIndex& cells, int y, double sgn) {
    const auto& ia = cells.idx[y][0];
    const auto& ib = cells.idx[y][1];
    for (std::size_t i : ia) dscore[i] += sgn / static_cast<double>(ia.size());
    for (std::size_t i : ib) dscore[i] -= sgn / static_cast<double>(ib.size());
}

struct RegularizerEval {
    double value = 0.0;
    std::vector<double> dmargin; // dR/d(margin_i), empty when not requested
};

RegularizerEval eval_regularizer(RegularizerKind kind, const LabeledDataset& data,
                                 const std::vector<double>& margin, bool want_gradient) {
    const CellIndex cells = CellIndex::build(data);
    const std::size_t n = data.size();
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) scores[i] = sigmoid(margin[i]);

    RegularizerEval out;
    std::vector<double> dscore; // dR/d(score_i)
    if (want_gradient) dscore.assign(n, 0.0);

    switch (kind) {
    case RegularizerKind::FDivergence: {
        // TV between the Bernoulli distributions of mean soft prediction
        // per group, conditioned on each y, summed over y.
        for (int y = 0; y < 2; ++y) {
            const double mean_a = cell_mean_score(scores, cells.idx[y][0]);
            const double mean_b = cell_mean_score(scores, cells.idx[y][1]);
            out.value += std::abs(mean_a - mean_b);
            if (want_gradient) add_mean_gap_grad(dscore, cells, y, sign_of(mean_a - mean_b));
        }
        break;
    }
    case RegularizerKind::FnrFprGap: {
        // soft-FNR averages (1 - score) over the y=1 cells; soft-FPR
        // averages score over the y=0 cells.
        const double fnr_a = 1.0 - cell_mean_score(scores, cells.idx[1][0]);
        const double fnr_b = 1.0 - cell_mean_score(scores, cells.idx[1][1]);
        const double fpr_a = cell_mean_score(scores, cells.idx[0][0]);
        const double fpr_b = cell_mean_score(scores, cells.idx[0][1]);
        out.value = std::abs(fnr_a - fnr_b) + std::abs(fpr_a - fpr_b);
        if (want_gradient) {
            add_mean_gap_grad(dscore, cells, 1, -sign_of(fnr_a - fnr_b));
            add_mean_gap_grad(dscore, cells, 0, sign_of(fpr_a - fpr_b));
        }
        break;
    }
    case RegularizerKind::Covariance: {
        // Squared covariance between the centered group indicator and the
        // signed margin, weighted per point by the probability of
        // misclassification.
        double g_mean = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            g_mean += data.groups[i] == Group::A ? 1.0 : 0.0;
        g_mean /= static_cast<double>(n);

        double cov = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double g = (data.groups[i] == Group::A ? 1.0 : 0.0) - g_mean;
            const double p_mis = data.labels[i] == 1 ? 1.0 - scores[i] : scores[i];
            cov += g * margin[i] * p_mis;
        }
        cov /= static_cast<double>(n);
        out.value = cov * cov;

        if (want_gradient) {
            out.dmargin.assign(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double g = (data.groups[i] == Group::A ? 1.0 : 0.0) - g_mean;
                const double s = scores[i];
                const double p_mis = data.labels[i] == 1 ? 1.0 - s : s;
                const double dp_dm = (data.labels[i] == 1 ? -1.0 : 1.0) * s * (1.0 - s);
                const double dcov_dm = g * (p_mis + margin[i] * dp_dm) / static_cast<double>(n);
                out.dmargin[i] = 2.0 * cov * dcov_dm;
            }
        }
        return out;
    }
    }

    if (want_gradient) {
        // chain dR/dscore through dscore/dmargin = s(1-s)
        out.dmargin.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            out.dmargin[i] = dscore[i] * scores[i] * (1.0 - scores[i]);
    }
    return out;
}

} // namespace

const char* regularizer_name(RegularizerKind kind) {
    switch (kind) {
    case RegularizerKind::FDivergence: return "c1";
    case RegularizerKind::FnrFprGap: return "c2";
    case RegularizerKind::Covariance: return "c3";
    }
    return "?";
}

RegularizerKind regularizer_from_name(const std::string& name) {
    if (name == "c1") return RegularizerKind::FDivergence;
    if (name == "c2") return RegularizerKind::FnrFprGap;
    if (name == "c3") return RegularizerKind::Covariance;
    throw std::invalid_argument("unknown regularizer: " + name +
                                " (expected c1, c2 or c3)");
}

void TrainConfig::validate() const {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
    if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be positive");
    if (epochs <= 0) throw std::invalid_argument("epochs must be positive");
}

double score(const ClassifierModel& model, const double* x, std::size_t d) {
    if (d != model.weights.size())
        throw std::invalid_argument("input dimension does not match model");
    double m = model.bias;
    for (std::size_t k = 0; k < d; ++k) m += model.weights[k] * x[k];
    return sigmoid(m);
}

double score(const ClassifierModel& model, const std::vector<double>& x) {
    return score(model, x.data(), x.size());
}

core::Prediction predict(const ClassifierModel& model, const LabeledDataset& data) {
    std::vector<double> scores(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        scores[i] = score(model, data.features.row(i), data.dim());
    return core::Prediction::from_scores(std::move(scores), model.threshold);
}

double regularizer_value(RegularizerKind kind, const ClassifierModel& model,
                         const LabeledDataset& data) {
    return eval_regularizer(kind, data, margins(model, data), false).value;
}

namespace {

double mean_logistic_loss(const LabeledDataset& data, const std::vector<double>& m) {
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        // -log sigma(m) = log(1 + e^-m), numerically stable via log1p
        const double z = data.labels[i] == 1 ? m[i] : -m[i];
        loss += z >= 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    }
    return loss / static_cast<double>(data.size());
}

struct LossEval {
    double loss = 0.0;
    LossGradient grad;
};

LossEval loss_and_gradient(const ClassifierModel& model, const LabeledDataset& data,
                           RegularizerKind kind, double lambda) {
    if (data.size() == 0) throw std::invalid_argument("empty dataset");
    const std::size_t n = data.size();
    const std::size_t d = data.dim();
    const std::vector<double> m = margins(model, data);

    LossEval out;
    out.loss = mean_logistic_loss(data, m);
    std::vector<double> dmargin(n);
    for (std::size_t i = 0; i < n; ++i)
        dmargin[i] = (sigmoid(m[i]) - static_cast<double>(data.labels[i])) /
                     static_cast<double>(n);
    if (lambda > 0.0) {
        const RegularizerEval reg = eval_regularizer(kind, data, m, true);
        out.loss += lambda * reg.value;
        for (std::size_t i = 0; i < n; ++i) dmargin[i] += lambda * reg.dmargin[i];
    }

    out.grad.weights.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = data.features.row(i);
        for (std::size_t k = 0; k < d; ++k) out.grad.weights[k] += dmargin[i] * x[k];
        out.grad.bias += dmargin[i];
    }
    return out;
}

} // namespace

double total_loss(const ClassifierModel& model, const LabeledDataset& data,
                  RegularizerKind kind, double lambda) {
    if (data.size() == 0) throw std::invalid_argument("empty dataset");
    const std::vector<double> m = margins(model, data);
    double loss = mean_logistic_loss(data, m);
    if (lambda > 0.0) loss += lambda * eval_regularizer(kind, data, m, false).value;
    return loss;
}

LossGradient total_loss_gradient(const ClassifierModel& model, const LabeledDataset& data,
                                 RegularizerKind kind, double lambda) {
    return loss_and_gradient(model, data, kind, lambda).grad;
}

ClassifierModel train(const LabeledDataset& data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.size() == 0) throw std::invalid_argument("empty dataset");
    CellIndex::build(data); // all four cells must be populated

    SeededRng rng(cfg.seed);
    ClassifierModel model;
    model.weights.resize(data.dim());
    for (double& w : model.weights) w = rng.next_uniform(-0.1, 0.1);
    model.bias = rng.next_uniform(-0.1, 0.1);

    // Fixed-step descent on a piecewise-smooth objective can oscillate
    // around the kinks at large lambda, so keep the best iterate seen.
    ClassifierModel best = model;
    double initial_loss = 0.0;
    double best_loss = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const LossEval eval = loss_and_gradient(model, data, cfg.regularizer, cfg.lambda);
        if (!std::isfinite(eval.loss))
            throw std::runtime_error("non-finite loss at epoch " + std::to_string(epoch));
        if (epoch == 0) {
            initial_loss = eval.loss;
            best_loss = eval.loss;
        } else if (eval.loss < best_loss) {
            best_loss = eval.loss;
            best = model;
        }
        for (std::size_t k = 0; k < model.weights.size(); ++k)
            model.weights[k] -= cfg.learning_rate * eval.grad.weights[k];
        model.bias -= cfg.learning_rate * eval.grad.bias;
    }

    const double final_loss = total_loss(model, data, cfg.regularizer, cfg.lambda);
    if (std::isfinite(final_loss) && final_loss < best_loss) {
        best_loss = final_loss;
        best = model;
    }
    if (best_loss > initial_loss)
        throw std::runtime_error("training failed to improve the loss (" +
                                 std::to_string(best_loss) + " > " +
                                 std::to_string(initial_loss) + ")");
    return best;
}

std::vector<TradeoffPoint> sweep(const LabeledDataset& data_train, const LabeledDataset& data_test,
                                 RegularizerKind kind, const std::vector<double>& lambdas,
                                 const TrainConfig& base_cfg) {
    if (lambdas.empty()) throw std::invalid_argument("empty lambda grid");

    std::vector<double> sorted = lambdas;
    std::sort(sorted.begin(), sorted.end());

    std::vector<TradeoffPoint> points;
    points.reserve(sorted.size());
    for (double lambda : sorted) {
        TrainConfig cfg = base_cfg;
        cfg.regularizer = kind;
        cfg.lambda = lambda;
        const ClassifierModel model = train(data_train, cfg);

        TradeoffPoint pt;
        pt.lambda = lambda;
        const core::Prediction pred_train = predict(model, data_train);
        const core::Prediction pred_test = predict(model, data_test);
        pt.train_accuracy = core::accuracy(pred_train, data_train);
        pt.test_accuracy = core::accuracy(pred_test, data_test);
        pt.train_delta_eo = core::delta_eo(pred_train, data_train);
        pt.test_delta_eo = core::delta_eo(pred_test, data_test);
        points.push_back(pt);
    }
    return points;
}

} // namespace fairbound::fairtrain
