#include "fairbound/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fairbound/rng.hpp"

namespace fairbound::data {

using core::Group;
using core::LabeledDataset;
using core::Matrix;

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

bool is_missing(const std::string& field) {
    const std::string t = trim(field);
    return t.empty() || t == "?" || t == "NA" || t == "NaN" || t == "nan";
}

// One CSV record, quote-aware (RFC 4180 style: quoted fields may contain
// commas and doubled quotes).
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

} // namespace

void DatasetSchema::validate() const {
    if (label_column.empty()) throw std::invalid_argument("schema: label_column missing");
    if (label_positive.empty()) throw std::invalid_argument("schema: label_positive missing");
    if (group_column.empty()) throw std::invalid_argument("schema: group_column missing");
    if (group_a.empty()) throw std::invalid_argument("schema: group_a missing");
    if (features.empty()) throw std::invalid_argument("schema: at least one feature required");
    for (const FeatureSpec& f : features) {
        if (f.name == label_column)
            throw std::invalid_argument("schema: label column listed among features");
        if (f.name == group_column)
            throw std::invalid_argument("schema: group column listed among features");
    }
}

DatasetSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema file " + path);

    DatasetSchema schema;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected `key = value`");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "label_column") {
            schema.label_column = value;
        } else if (key == "label_positive") {
            schema.label_positive = value;
        } else if (key == "label_negative") {
            schema.label_negative = value;
        } else if (key == "group_column") {
            schema.group_column = value;
        } else if (key == "group_a") {
            schema.group_a = value;
        } else if (key == "drop_missing") {
            schema.drop_rows_with_missing = (value == "true" || value == "1");
        } else if (key == "feature") {
            const auto colon = value.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": feature needs `name : kind`");
            FeatureSpec spec;
            spec.name = trim(value.substr(0, colon));
            const std::string kind = trim(value.substr(colon + 1));
            if (kind == "numeric")
                spec.kind = FeatureKind::Numeric;
            else if (kind == "categorical")
                spec.kind = FeatureKind::Categorical;
            else
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": unknown feature kind " + kind);
            schema.features.push_back(std::move(spec));
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown schema key " + key);
        }
    }
    schema.validate();
    return schema;
}

LoadResult load_csv(const std::string& path, const DatasetSchema& schema) {
    schema.validate();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const std::vector<std::string> header = split_csv_line(line);

    auto column_of = [&](const std::string& name) {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (trim(header[j]) == name) return j;
        throw std::runtime_error(path + ": missing declared column \"" + name + "\"");
    };

    const std::size_t label_col = column_of(schema.label_column);
    const std::size_t group_col = column_of(schema.group_column);
    std::vector<std::size_t> feature_cols;
    for (const FeatureSpec& f : schema.features) feature_cols.push_back(column_of(f.name));

    // First pass: keep raw rows, collect category vocabularies in
    // first-appearance order.
    struct RawRow {
        int label;
        Group group;
        std::vector<std::string> fields; // one per declared feature
    };
    std::vector<RawRow> rows;
    std::vector<std::vector<std::string>> categories(schema.features.size());

    LoadResult result;
    std::size_t rowno = 1;
    while (std::getline(in, line)) {
        ++rowno;
        if (trim(line).empty()) continue;
        ++result.report.rows_read;
        const std::vector<std::string> fields = split_csv_line(line);

        auto field_at = [&](std::size_t col) -> std::string {
            if (col >= fields.size())
                throw std::runtime_error(path + ": row " + std::to_string(rowno) +
                                         " has too few fields");
            return trim(fields[col]);
        };

        bool missing = is_missing(field_at(label_col)) || is_missing(field_at(group_col));
        std::vector<std::string> feat_fields(schema.features.size());
        for (std::size_t f = 0; f < schema.features.size() && !missing; ++f) {
            feat_fields[f] = field_at(feature_cols[f]);
            missing = is_missing(feat_fields[f]);
        }
        if (missing) {
            if (!schema.drop_rows_with_missing)
                throw std::runtime_error(path + ": missing value at row " +
                                         std::to_string(rowno));
            ++result.report.rows_dropped;
            continue;
        }

        RawRow raw;
        const std::string label_value = field_at(label_col);
        if (label_value == schema.label_positive) {
            raw.label = 1;
        } else if (schema.label_negative.empty() || label_value == schema.label_negative) {
            raw.label = 0;
        } else {
            throw std::runtime_error(path + ": unmappable label value \"" + label_value +
                                     "\" at row " + std::to_string(rowno));
        }
        raw.group = field_at(group_col) == schema.group_a ? Group::A : Group::B;
        raw.fields = std::move(feat_fields);

        for (std::size_t f = 0; f < schema.features.size(); ++f) {
            if (schema.features[f].kind != FeatureKind::Categorical) continue;
            auto& vocab = categories[f];
            if (std::find(vocab.begin(), vocab.end(), raw.fields[f]) == vocab.end())
                vocab.push_back(raw.fields[f]);
        }
        rows.push_back(std::move(raw));
    }
    if (rows.empty()) throw std::runtime_error(path + ": all rows dropped");

    // Encoded column layout.
    std::vector<std::string> names;
    for (std::size_t f = 0; f < schema.features.size(); ++f) {
        if (schema.features[f].kind == FeatureKind::Numeric) {
            names.push_back(schema.features[f].name);
        } else {
            for (const std::string& cat : categories[f])
                names.push_back(schema.features[f].name + "=" + cat);
        }
    }

    LabeledDataset ds;
    ds.feature_names = names;
    ds.features = Matrix(rows.size(), names.size(), 0.0);
    ds.labels.reserve(rows.size());
    ds.groups.reserve(rows.size());

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const RawRow& raw = rows[i];
        ds.labels.push_back(raw.label);
        ds.groups.push_back(raw.group);
        std::size_t col = 0;
        for (std::size_t f = 0; f < schema.features.size(); ++f) {
            if (schema.features[f].kind == FeatureKind::Numeric) {
                try {
                    ds.features(i, col) = std::stod(raw.fields[f]);
                } catch (const std::exception&) {
                    throw std::runtime_error(path + ": non-numeric value \"" + raw.fields[f] +
                                             "\" in column " + schema.features[f].name);
                }
                ++col;
            } else {
                const auto& vocab = categories[f];
                const auto it = std::find(vocab.begin(), vocab.end(), raw.fields[f]);
                ds.features(i, col + static_cast<std::size_t>(it - vocab.begin())) = 1.0;
                col += vocab.size();
            }
        }
    }

    result.report.rows_kept = rows.size();
    result.report.n_features_after_encoding = names.size();
    result.dataset = std::move(ds);
    return result;
}

namespace {

LabeledDataset take_rows(const LabeledDataset& data, const std::vector<std::size_t>& idx) {
    LabeledDataset out;
    out.feature_names = data.feature_names;
    out.features = Matrix(idx.size(), data.dim(), 0.0);
    out.labels.reserve(idx.size());
    out.groups.reserve(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const std::size_t i = idx[r];
        for (std::size_t k = 0; k < data.dim(); ++k) out.features(r, k) = data.features(i, k);
        out.labels.push_back(data.labels[i]);
        out.groups.push_back(data.groups[i]);
    }
    return out;
}

SplitResult split_at(const LabeledDataset& data, std::size_t n_train, std::uint64_t seed) {
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    SeededRng rng(seed);
    shuffle_inplace(order, rng);

    SplitResult out;
    out.train = take_rows(data, {order.begin(), order.begin() + static_cast<long>(n_train)});
    out.test = take_rows(data, {order.begin() + static_cast<long>(n_train), order.end()});
    out.empty_test_warning = out.test.size() == 0;
    return out;
}

} // namespace

SplitResult split(const LabeledDataset& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction <= 1.0))
        throw std::invalid_argument("train_fraction must lie in (0,1]");
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(data.size())));
    return split_at(data, std::min(n_train, data.size()), seed);
}

SplitResult split_counts(const LabeledDataset& data, std::size_t n_train, std::size_t n_test,
                         std::uint64_t seed) {
    if (n_train + n_test > data.size())
        throw std::invalid_argument("split counts exceed dataset size");
    SplitResult out = split_at(data, n_train, seed);
    // trim the test side to the requested count
    if (out.test.size() > n_test) {
        std::vector<std::size_t> keep(n_test);
        std::iota(keep.begin(), keep.end(), std::size_t{0});
        out.test = take_rows(out.test, keep);
    }
    out.empty_test_warning = out.test.size() == 0;
    return out;
}

namespace {

void apply_standardization(LabeledDataset& data, const std::vector<std::size_t>& keep,
                           const std::vector<double>& mean, const std::vector<double>& sd) {
    Matrix next(data.size(), keep.size(), 0.0);
    std::vector<std::string> names;
    names.reserve(keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c) {
        const std::size_t k = keep[c];
        names.push_back(data.feature_names[k]);
        for (std::size_t i = 0; i < data.size(); ++i)
            next(i, c) = (data.features(i, k) - mean[k]) / sd[k];
    }
    data.features = std::move(next);
    data.feature_names = std::move(names);
}

void standardize_impl(LabeledDataset& stats_source, LabeledDataset* other,
                      PreprocessReport& report) {
    const std::size_t d = stats_source.dim();
    const std::size_t n = stats_source.size();
    if (n == 0) throw std::invalid_argument("empty dataset");

    std::vector<double> mean(d, 0.0), sd(d, 0.0);
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < d; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += stats_source.features(i, k);
        mean[k] = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dlt = stats_source.features(i, k) - mean[k];
            ss += dlt * dlt;
        }
        sd[k] = std::sqrt(ss / static_cast<double>(n));
        if (sd[k] > 1e-12) {
            keep.push_back(k);
        } else {
            report.dropped_constant_columns.push_back(stats_source.feature_names[k]);
        }
    }

    report.column_names.clear();
    report.column_means.clear();
    report.column_stds.clear();
    for (std::size_t k : keep) {
        report.column_names.push_back(stats_source.feature_names[k]);
        report.column_means.push_back(mean[k]);
        report.column_stds.push_back(sd[k]);
    }
    report.n_features_after_encoding = keep.size();

    if (other && other->size() > 0) apply_standardization(*other, keep, mean, sd);
    apply_standardization(stats_source, keep, mean, sd);
}

} // namespace

void standardize_train_test(LabeledDataset& train, LabeledDataset& test,
                            PreprocessReport& report) {
    if (test.size() > 0 && test.dim() != train.dim())
        throw std::invalid_argument("train/test dimension mismatch");
    standardize_impl(train, &test, report);
}

void standardize_full(LabeledDataset& dataset, PreprocessReport& report) {
    standardize_impl(dataset, nullptr, report);
}

GroupConditionalSamples group_conditional_samples(const LabeledDataset& data) {
    std::vector<std::size_t> cell_idx[2][2];
    std::vector<std::size_t> class_idx[2];
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int y = data.labels[i];
        if (y != 0 && y != 1) throw std::invalid_argument("invalid alphabet");
        cell_idx[y][static_cast<int>(data.groups[i])].push_back(i);
        class_idx[y].push_back(i);
    }
    for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z)
            if (cell_idx[y][z].empty())
                throw std::runtime_error(
                    std::string("undefined conditional rate: cell (y=") + std::to_string(y) +
                    ", z=" + core::group_name(static_cast<Group>(z)) + ") is empty");

    auto rows_of = [&](const std::vector<std::size_t>& idx) {
        Matrix m(idx.size(), data.dim(), 0.0);
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t k = 0; k < data.dim(); ++k) m(r, k) = data.features(idx[r], k);
        return m;
    };

    GroupConditionalSamples out;
    for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z)
            out.cell[y][z] = rows_of(cell_idx[y][z]);
    out.class1 = rows_of(class_idx[1]);
    out.class0 = rows_of(class_idx[0]);
    return out;
}

void save_dataset(const LabeledDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "label,group";
    for (const std::string& name : data.feature_names) out << ',' << name;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << data.labels[i] << ',' << core::group_name(data.groups[i]);
        for (std::size_t k = 0; k < data.dim(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", data.features(i, k));
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

LabeledDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "label" || header[1] != "group")
        throw std::runtime_error(path + ": expected internal dump header label,group,...");

    LabeledDataset ds;
    ds.feature_names.assign(header.begin() + 2, header.end());
    std::vector<double> values;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error(path + ": malformed dump row");
        ds.labels.push_back(std::stoi(fields[0]));
        if (fields[1] == "a")
            ds.groups.push_back(Group::A);
        else if (fields[1] == "b")
            ds.groups.push_back(Group::B);
        else
            throw std::runtime_error(path + ": invalid group value " + fields[1]);
        for (std::size_t k = 2; k < fields.size(); ++k) values.push_back(std::stod(fields[k]));
        ++n;
    }
    ds.features = Matrix(n, ds.feature_names.size(), 0.0);
    ds.features.values = std::move(values);
    return ds;
}

} // namespace fairbound::data
