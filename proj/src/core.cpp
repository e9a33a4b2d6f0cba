#include "fairbound/core.hpp"

#include <stdexcept>
#include <string>

namespace fairbound::core {

const char* group_name(Group z) { return z == Group::A ? "a" : "b"; }

long long GroupStatistics::total() const {
    long long n = 0;
    for (const auto& row : cell_counts)
        for (long long c : row) n += c;
    return n;
}

Prediction Prediction::from_decisions(std::vector<int> decisions) {
    Prediction p;
    p.decisions = std::move(decisions);
    return p;
}

Prediction Prediction::from_scores(std::vector<double> scores, double threshold) {
    Prediction p;
    p.decisions.reserve(scores.size());
    for (double s : scores) p.decisions.push_back(s >= threshold ? 1 : 0);
    p.scores = std::move(scores);
    p.threshold = threshold;
    return p;
}

namespace {

void check_alphabet(const LabeledDataset& data) {
    for (int y : data.labels)
        if (y != 0 && y != 1) throw std::invalid_argument("invalid alphabet");
    for (Group z : data.groups)
        if (z != Group::A && z != Group::B) throw std::invalid_argument("invalid alphabet");
}

} // namespace

GroupStatistics compute_group_stats(const LabeledDataset& data) {
    const std::size_t n = data.size();
    if (n == 0) throw std::invalid_argument("empty dataset");
    if (data.groups.size() != n)
        throw std::invalid_argument("labels/groups length mismatch");
    check_alphabet(data);

    GroupStatistics st;
    for (std::size_t i = 0; i < n; ++i) {
        const auto y = static_cast<std::size_t>(data.labels[i]);
        const auto z = static_cast<std::size_t>(data.groups[i]);
        ++st.cell_counts[y][z];
    }
    const double dn = static_cast<double>(n);
    const long long n1 = st.cell(1, Group::A) + st.cell(1, Group::B);
    const long long n0 = st.cell(0, Group::A) + st.cell(0, Group::B);
    const long long na = st.cell(0, Group::A) + st.cell(1, Group::A);
    st.alpha = static_cast<double>(n1) / dn;
    st.beta = static_cast<double>(na) / dn;
    st.eta = n1 > 0 ? static_cast<double>(st.cell(1, Group::A)) / static_cast<double>(n1) : 0.0;
    st.gamma = n0 > 0 ? static_cast<double>(st.cell(0, Group::A)) / static_cast<double>(n0) : 0.0;
    return st;
}

double accuracy(const Prediction& pred, const LabeledDataset& data) {
    const std::size_t n = data.size();
    if (pred.decisions.size() != n)
        throw std::invalid_argument("prediction/dataset length mismatch");
    if (n == 0) throw std::invalid_argument("empty dataset");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (pred.decisions[i] == data.labels[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(n);
}

double delta_eo(const Prediction& pred, const LabeledDataset& data) {
    const std::size_t n = data.size();
    if (pred.decisions.size() != n)
        throw std::invalid_argument("prediction/dataset length mismatch");
    if (n == 0) throw std::invalid_argument("empty dataset");
    check_alphabet(data);

    long long count[2][2] = {{0, 0}, {0, 0}};
    long long ones[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < n; ++i) {
        const int y = data.labels[i];
        const int z = static_cast<int>(data.groups[i]);
        ++count[y][z];
        if (pred.decisions[i] == 1) ++ones[y][z];
    }
    double worst = 0.0;
    for (int y = 0; y < 2; ++y) {
        for (int z = 0; z < 2; ++z) {
            if (count[y][z] == 0)
                throw std::runtime_error(
                    std::string("undefined conditional rate: cell (y=") + std::to_string(y) +
                    ", z=" + group_name(static_cast<Group>(z)) + ") is empty");
        }
        const double rate_a = static_cast<double>(ones[y][0]) / static_cast<double>(count[y][0]);
        const double rate_b = static_cast<double>(ones[y][1]) / static_cast<double>(count[y][1]);
        const double gap = rate_a > rate_b ? rate_a - rate_b : rate_b - rate_a;
        if (gap > worst) worst = gap;
    }
    return worst;
}

} // namespace fairbound::core
