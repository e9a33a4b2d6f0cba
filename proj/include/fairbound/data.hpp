#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fairbound/core.hpp"

namespace fairbound::data {

enum class FeatureKind { Numeric, Categorical };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
};

/// Declares how a delimited text file maps onto a LabeledDataset.
struct DatasetSchema {
    std::string label_column;
    std::string label_positive; // raw value mapped to label 1
    std::string label_negative; // optional; when set, other values are rejected
    std::string group_column;
    std::string group_a; // raw value mapped to group a; everything else is b
    std::vector<FeatureSpec> features;
    bool drop_rows_with_missing = true;

    void validate() const;
};

/// Key-value schema file, one `key = value` per line, repeated
/// `feature = name : kind` lines keep declaration order.
DatasetSchema load_schema(const std::string& path);

struct PreprocessReport {
    std::size_t rows_read = 0;
    std::size_t rows_kept = 0;
    std::size_t rows_dropped = 0;
    std::size_t n_features_after_encoding = 0;
    std::vector<std::string> dropped_constant_columns;
    // Standardization statistics per kept column, filled by standardize_*.
    std::vector<std::string> column_names;
    std::vector<double> column_means;
    std::vector<double> column_stds;
};

struct LoadResult {
    core::LabeledDataset dataset; // one-hot encoded, numerics still raw
    PreprocessReport report;
};

/// Comma-delimited text with a header row. Categorical features are
/// one-hot encoded in first-appearance order; rows with missing values
/// are dropped (schema flag). Standardization is a separate step so test
/// splits can reuse training statistics.
LoadResult load_csv(const std::string& path, const DatasetSchema& schema);

struct SplitResult {
    core::LabeledDataset train;
    core::LabeledDataset test;
    bool empty_test_warning = false;
};

/// Deterministic shuffled split per seed.
SplitResult split(const core::LabeledDataset& data, double train_fraction, std::uint64_t seed);

/// Explicit-count split (reproduces published split sizes).
SplitResult split_counts(const core::LabeledDataset& data, std::size_t n_train,
                         std::size_t n_test, std::uint64_t seed);

/// Standardize every feature column with training-split statistics,
/// applying the same transform to the test split. Constant columns are
/// dropped from both splits and recorded in the report.
void standardize_train_test(core::LabeledDataset& train, core::LabeledDataset& test,
                            PreprocessReport& report);

/// Full-data standardization (the no-split case).
void standardize_full(core::LabeledDataset& dataset, PreprocessReport& report);

/// Row subsets of the feature matrix for each conditioning event: the
/// direct inputs to the TV estimator.
struct GroupConditionalSamples {
    std::array<std::array<core::Matrix, 2>, 2> cell; // [y][z]
    core::Matrix class1; // X | Y=1
    core::Matrix class0; // X | Y=0
};

GroupConditionalSamples group_conditional_samples(const core::LabeledDataset& data);

/// Internal tabular dump: header `label,group,<feature names>` then one
/// row per sample with full-precision floats. Round-trips bit-exactly.
void save_dataset(const core::LabeledDataset& data, const std::string& path);
core::LabeledDataset load_dataset(const std::string& path);

} // namespace fairbound::data
