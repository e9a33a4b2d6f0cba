#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairbound/core.hpp"

namespace fairbound::fairtrain {

/// Linear logistic scorer. All three fair classifiers share this model
/// class so differences reflect only the regularizers.
struct ClassifierModel {
    std::vector<double> weights;
    double bias = 0.0;
    double threshold = 0.5;
};

enum class RegularizerKind {
    FDivergence, // c1
    FnrFprGap,   // c2
    Covariance,  // c3
};

const char* regularizer_name(RegularizerKind kind);
RegularizerKind regularizer_from_name(const std::string& name);

struct TrainConfig {
    RegularizerKind regularizer = RegularizerKind::FDivergence;
    double lambda = 0.0;
    double learning_rate = 0.05;
    int epochs = 2000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TradeoffPoint {
    double lambda = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double train_delta_eo = 0.0;
    double test_delta_eo = 0.0;
};

/// sigma(w . x + b)
double score(const ClassifierModel& model, const double* x, std::size_t d);
double score(const ClassifierModel& model, const std::vector<double>& x);

/// Scores plus thresholded decisions for a whole dataset.
core::Prediction predict(const ClassifierModel& model, const core::LabeledDataset& data);

/// The three soft EO penalties. All are >= 0 and vanish on group-symmetric
/// data under a group-blind model. Throws if a (y,z) cell is empty.
double regularizer_value(RegularizerKind kind, const ClassifierModel& model,
                         const core::LabeledDataset& data);

/// mean logistic loss + lambda * regularizer (regularizer skipped when
/// lambda == 0)
double total_loss(const ClassifierModel& model, const core::LabeledDataset& data,
                  RegularizerKind kind, double lambda);

struct LossGradient {
    std::vector<double> weights;
    double bias = 0.0;
};

LossGradient total_loss_gradient(const ClassifierModel& model, const core::LabeledDataset& data,
                                 RegularizerKind kind, double lambda);

/// Full-batch gradient descent on the regularized loss from a seeded
/// uniform initialization. Errors if the loss goes non-finite or fails to
/// improve on the initial value.
ClassifierModel train(const core::LabeledDataset& data, const TrainConfig& cfg);

/// One train + evaluation per lambda; evaluation uses core::accuracy and
/// core::delta_eo on both splits.
std::vector<TradeoffPoint> sweep(const core::LabeledDataset& data_train,
                                 const core::LabeledDataset& data_test, RegularizerKind kind,
                                 const std::vector<double>& lambdas, const TrainConfig& base_cfg);

} // namespace fairbound::fairtrain
