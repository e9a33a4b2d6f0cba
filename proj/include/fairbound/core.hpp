#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fairbound::core {

// Minimal dense row-major matrix. All numerics in this project are
// desk-scale, so a flat vector<double> is all we need.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), values(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

    const double* row(std::size_t i) const { return values.data() + i * cols; }
    double* row(std::size_t i) { return values.data() + i * cols; }
};

enum class Group : int { A = 0, B = 1 };

const char* group_name(Group z);

/// Feature matrix with binary labels and binary sensitive attributes.
struct LabeledDataset {
    Matrix features;                        // n x d
    std::vector<int> labels;                // over {0,1}
    std::vector<Group> groups;              // over {a,b}
    std::vector<std::string> feature_names; // length d

    std::size_t size() const { return labels.size(); }
    std::size_t dim() const { return features.cols; }
};

/// The scalar statistics alpha, beta, eta, gamma plus per-(y,z) counts.
/// eta (resp. gamma) is stored as 0 when the y=1 (resp. y=0) slice is
/// empty; the zero cell counts flag the degenerate case.
struct GroupStatistics {
    double alpha = 0.0; // P(Y=1)
    double beta = 0.0;  // P(Z=a)
    double eta = 0.0;   // P(Z=a|Y=1)
    double gamma = 0.0; // P(Z=a|Y=0)
    std::array<std::array<long long, 2>, 2> cell_counts{}; // [y][z]

    long long cell(int y, Group z) const {
        return cell_counts[static_cast<std::size_t>(y)][static_cast<std::size_t>(z)];
    }
    long long total() const;
    bool eta_defined() const { return cell(1, Group::A) + cell(1, Group::B) > 0; }
    bool gamma_defined() const { return cell(0, Group::A) + cell(0, Group::B) > 0; }
};

/// Hard decisions, optionally backed by scores. When scores are present,
/// decisions[i] = 1 iff scores[i] >= threshold.
struct Prediction {
    std::vector<int> decisions;
    std::optional<std::vector<double>> scores;
    double threshold = 0.5;

    static Prediction from_decisions(std::vector<int> decisions);
    static Prediction from_scores(std::vector<double> scores, double threshold = 0.5);
};

GroupStatistics compute_group_stats(const LabeledDataset& data);

/// Fraction of indices with decisions[i] == labels[i].
double accuracy(const Prediction& pred, const LabeledDataset& data);

/// max over y of |P^(f=1 | Z=a, Y=y) - P^(f=1 | Z=b, Y=y)|, rates counted
/// within cells. Throws if any (y,z) cell is empty.
double delta_eo(const Prediction& pred, const LabeledDataset& data);

} // namespace fairbound::core
