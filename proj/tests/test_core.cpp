#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "fairbound/core.hpp"
#include "fairbound/rng.hpp"
#include "support/test_utils.hpp"

using namespace fairbound;
using core::Group;
using core::LabeledDataset;
using core::Prediction;

namespace {

LabeledDataset make_dataset(std::vector<int> labels, std::vector<Group> groups) {
    LabeledDataset ds;
    ds.labels = std::move(labels);
    ds.groups = std::move(groups);
    ds.features = core::Matrix(ds.labels.size(), 1, 0.0);
    ds.feature_names = {"x"};
    return ds;
}

LabeledDataset random_dataset(std::uint64_t seed, std::size_t n) {
    SeededRng rng(seed);
    std::vector<int> labels;
    std::vector<Group> groups;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(rng.next_unit() < 0.5 ? 1 : 0);
        groups.push_back(rng.next_unit() < 0.5 ? Group::A : Group::B);
    }
    return make_dataset(std::move(labels), std::move(groups));
}

} // namespace

TEST_CASE("compute_group_stats on a balanced four-row dataset") {
    const auto ds = make_dataset({1, 1, 0, 0}, {Group::A, Group::A, Group::B, Group::B});
    const auto st = core::compute_group_stats(ds);
    CHECK(st.alpha == 0.5);
    CHECK(st.beta == 0.5);
    CHECK(st.eta == 1.0);
    CHECK(st.gamma == 0.0);
    CHECK(st.total() == 4);
}

TEST_CASE("compute_group_stats tolerates a degenerate label slice") {
    const auto ds = make_dataset({1, 1, 1}, {Group::A, Group::A, Group::A});
    const auto st = core::compute_group_stats(ds);
    CHECK(st.alpha == 1.0);
    CHECK(st.beta == 1.0);
    CHECK(st.eta == 1.0);
    CHECK(st.gamma == 0.0); // stored as 0, flagged by the empty cells
    CHECK(!st.gamma_defined());
    CHECK(st.cell(0, Group::A) == 0);
}

TEST_CASE("compute_group_stats rejects bad input") {
    CHECK_THROWS_WITH_AS(core::compute_group_stats(make_dataset({}, {})), "empty dataset",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(core::compute_group_stats(make_dataset({2}, {Group::A})),
                         "invalid alphabet", std::invalid_argument);
}

TEST_CASE("group statistics satisfy the beta identity and recount from cells") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto ds = random_dataset(seed, 3 + seed % 200);
        const auto st = core::compute_group_stats(ds);
        CHECK(std::abs(st.alpha * st.eta + (1.0 - st.alpha) * st.gamma - st.beta) <= 1e-12);
        CHECK(st.total() == static_cast<long long>(ds.size()));
        const double n = static_cast<double>(ds.size());
        const double alpha_rec =
            static_cast<double>(st.cell(1, Group::A) + st.cell(1, Group::B)) / n;
        const double beta_rec =
            static_cast<double>(st.cell(0, Group::A) + st.cell(1, Group::A)) / n;
        CHECK(std::abs(alpha_rec - st.alpha) <= 1e-12);
        CHECK(std::abs(beta_rec - st.beta) <= 1e-12);
    }
}

TEST_CASE("group statistics are consistent across a partition") {
    const auto ds = random_dataset(77, 501);
    // split rows into two parts by index parity
    std::vector<int> l1, l2;
    std::vector<Group> g1, g2;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i % 2 == 0) {
            l1.push_back(ds.labels[i]);
            g1.push_back(ds.groups[i]);
        } else {
            l2.push_back(ds.labels[i]);
            g2.push_back(ds.groups[i]);
        }
    }
    const auto full = core::compute_group_stats(ds);
    const auto a = core::compute_group_stats(make_dataset(l1, g1));
    const auto b = core::compute_group_stats(make_dataset(l2, g2));
    const double na = static_cast<double>(a.total()), nb = static_cast<double>(b.total());
    const double n = na + nb;
    CHECK(std::abs(full.alpha - (na * a.alpha + nb * b.alpha) / n) <= 1e-12);
    CHECK(std::abs(full.beta - (na * a.beta + nb * b.beta) / n) <= 1e-12);
}

TEST_CASE("accuracy counts agreement") {
    const auto ds = make_dataset({1, 1, 0}, {Group::A, Group::B, Group::A});
    CHECK(core::accuracy(Prediction::from_decisions({1, 1, 0}), ds) == 1.0);
    CHECK(core::accuracy(Prediction::from_decisions({0, 0, 1}), ds) == 0.0);
    CHECK(core::accuracy(Prediction::from_decisions({1, 0, 0}), ds) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(core::accuracy(Prediction::from_decisions({1, 0}), ds),
                    std::invalid_argument);
}

TEST_CASE("accuracy of a prediction and its flip sum to exactly one") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ds = random_dataset(seed, 1 + seed * 13 % 97);
        SeededRng rng(seed + 1000);
        std::vector<int> dec, flipped;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const int v = rng.next_unit() < 0.5 ? 1 : 0;
            dec.push_back(v);
            flipped.push_back(1 - v);
        }
        const double acc = core::accuracy(Prediction::from_decisions(dec), ds);
        const double acc_flip = core::accuracy(Prediction::from_decisions(flipped), ds);
        CHECK(acc + acc_flip == 1.0);
    }
}

TEST_CASE("prediction from scores thresholds at 0.5 by default") {
    const auto p = Prediction::from_scores({0.2, 0.5, 0.9});
    CHECK(p.decisions == std::vector<int>{0, 1, 1});
    CHECK(p.threshold == 0.5);
}

TEST_CASE("delta_eo is zero for a constant classifier") {
    const auto ds =
        make_dataset({1, 1, 0, 0}, {Group::A, Group::B, Group::A, Group::B});
    CHECK(core::delta_eo(Prediction::from_decisions({1, 1, 1, 1}), ds) == 0.0);
}

TEST_CASE("delta_eo picks the worse label slice") {
    // y=1: rate a=1, b=0; y=0: rate a=1/2, b=1/2
    const auto ds = make_dataset({1, 1, 0, 0, 0, 0},
                                 {Group::A, Group::B, Group::A, Group::A, Group::B, Group::B});
    const auto pred = Prediction::from_decisions({1, 0, 1, 0, 1, 0});
    CHECK(core::delta_eo(pred, ds) == 1.0);
}

TEST_CASE("delta_eo on the hand-counted fixture") {
    // cells: (1,a)=3 rows rate 2/3, (1,b)=2 rows rate 1/2,
    //        (0,a)=2 rows rate 1/2, (0,b)=4 rows rate 1/4
    // gaps 1/6 and 1/4, so delta is 0.25
    std::vector<int> labels = {1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
    std::vector<Group> groups = {Group::A, Group::A, Group::A, Group::B, Group::B,
                                 Group::A, Group::A, Group::B, Group::B, Group::B, Group::B};
    std::vector<int> dec = {1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 0};
    const auto ds = make_dataset(labels, groups);
    CHECK(core::delta_eo(Prediction::from_decisions(dec), ds) == 0.25);
}

TEST_CASE("delta_eo names the empty cell") {
    const auto ds = make_dataset({1, 1, 0}, {Group::A, Group::B, Group::A});
    CHECK_THROWS_WITH_AS(core::delta_eo(Prediction::from_decisions({1, 1, 1}), ds),
                         "undefined conditional rate: cell (y=0, z=b) is empty",
                         std::runtime_error);
}

TEST_CASE("delta_eo is invariant to row permutation") {
    const auto ds = random_dataset(5, 200);
    SeededRng rng(123);
    std::vector<int> dec;
    for (std::size_t i = 0; i < ds.size(); ++i) dec.push_back(rng.next_unit() < 0.4 ? 1 : 0);
    const double base = core::delta_eo(Prediction::from_decisions(dec), ds);

    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int round = 0; round < 5; ++round) {
        shuffle_inplace(order, rng);
        LabeledDataset shuffled = ds;
        std::vector<int> dec_shuffled(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            shuffled.labels[i] = ds.labels[order[i]];
            shuffled.groups[i] = ds.groups[order[i]];
            dec_shuffled[i] = dec[order[i]];
        }
        CHECK(core::delta_eo(Prediction::from_decisions(dec_shuffled), shuffled) == base);
    }
}

TEST_CASE("delta_eo vanishes when group-conditional samples coincide") {
    // identical per-y feature multisets in both groups, decisions a pure
    // function of the feature
    LabeledDataset ds;
    ds.feature_names = {"x"};
    std::vector<double> feats;
    for (int y = 0; y < 2; ++y) {
        for (Group z : {Group::A, Group::B}) {
            for (double v : {0.1, 0.6, 0.9}) {
                ds.labels.push_back(y);
                ds.groups.push_back(z);
                feats.push_back(v + y);
            }
        }
    }
    ds.features = core::Matrix(ds.labels.size(), 1, 0.0);
    for (std::size_t i = 0; i < feats.size(); ++i) ds.features(i, 0) = feats[i];

    std::vector<int> dec;
    for (std::size_t i = 0; i < ds.size(); ++i)
        dec.push_back(ds.features(i, 0) > 0.55 ? 1 : 0);
    CHECK(core::delta_eo(Prediction::from_decisions(dec), ds) == 0.0);
}
