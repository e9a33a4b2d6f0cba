#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fairbound/core.hpp"
#include "fairbound/fairtrain.hpp"
#include "support/test_utils.hpp"

using namespace fairbound;
using core::Group;
using core::LabeledDataset;
using fairtrain::ClassifierModel;
using fairtrain::RegularizerKind;
using fairtrain::TrainConfig;

namespace {

constexpr RegularizerKind kAllKinds[] = {RegularizerKind::FDivergence,
                                         RegularizerKind::FnrFprGap,
                                         RegularizerKind::Covariance};

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// one feature, one row per (y,z) cell value; margins equal the feature
ClassifierModel identity_model() {
    ClassifierModel m;
    m.weights = {1.0};
    m.bias = 0.0;
    return m;
}

LabeledDataset cell_fixture() {
    // (y,z) cells with two rows each; feature values chosen so the soft
    // rates are hand-computable
    LabeledDataset ds;
    ds.feature_names = {"x"};
    struct Row {
        int y;
        Group z;
        double x;
    };
    const std::vector<Row> rows = {
        {1, Group::A, 2.0}, {1, Group::A, 0.0},  {1, Group::B, 1.0}, {1, Group::B, -1.0},
        {0, Group::A, 0.0}, {0, Group::A, -2.0}, {0, Group::B, 1.0}, {0, Group::B, -3.0},
    };
    ds.features = core::Matrix(rows.size(), 1, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ds.labels.push_back(rows[i].y);
        ds.groups.push_back(rows[i].z);
        ds.features(i, 0) = rows[i].x;
    }
    return ds;
}

// duplicate every (x,y) row into both groups
LabeledDataset mirrored_groups_dataset(std::uint64_t seed, std::size_t n_pairs) {
    SeededRng rng(seed);
    LabeledDataset ds;
    ds.feature_names = {"x0", "x1"};
    ds.features = core::Matrix(2 * n_pairs, 2, 0.0);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        const int y = rng.next_unit() < 0.5 ? 1 : 0;
        const double x0 = testutil::draw_normal(rng, y == 1 ? 1.0 : -1.0, 1.0);
        const double x1 = testutil::draw_normal(rng);
        for (Group z : {Group::A, Group::B}) {
            const std::size_t row = 2 * i + static_cast<std::size_t>(z);
            ds.labels.push_back(y);
            ds.groups.push_back(z);
            ds.features(row, 0) = x0;
            ds.features(row, 1) = x1;
        }
    }
    return ds;
}

} // namespace

TEST_CASE("score is the logistic link") {
    ClassifierModel zero;
    zero.weights = {0.0, 0.0};
    CHECK(fairtrain::score(zero, {3.0, -1.0}) == 0.5);

    ClassifierModel big;
    big.weights = {50.0};
    CHECK(fairtrain::score(big, {2.0}) > 0.9999999);

    ClassifierModel toy;
    toy.weights = {0.8, -0.5};
    toy.bias = 0.3;
    const double expected = sigmoid(0.8 * 1.5 - 0.5 * 2.0 + 0.3);
    CHECK(fairtrain::score(toy, {1.5, 2.0}) == doctest::Approx(expected).epsilon(1e-15));

    CHECK_THROWS_AS(fairtrain::score(toy, {1.0}), std::invalid_argument);
}

TEST_CASE("all regularizers vanish on mirrored groups under any model") {
    const LabeledDataset ds = mirrored_groups_dataset(3, 60);
    ClassifierModel model;
    model.weights = {0.7, -0.4};
    model.bias = 0.1;
    for (RegularizerKind kind : kAllKinds) {
        const double v = fairtrain::regularizer_value(kind, model, ds);
        CHECK(v >= 0.0);
        CHECK(v <= 1e-8);
    }
}

TEST_CASE("covariance regularizer is zero when margins ignore the group") {
    const LabeledDataset ds = mirrored_groups_dataset(9, 100);
    ClassifierModel model;
    model.weights = {1.2, 0.3};
    model.bias = -0.2;
    CHECK(fairtrain::regularizer_value(RegularizerKind::Covariance, model, ds) <= 1e-10);
}

TEST_CASE("soft FNR/FPR gaps match hand arithmetic on the cell fixture") {
    const LabeledDataset ds = cell_fixture();
    const ClassifierModel model = identity_model();

    const double mean_1a = 0.5 * (sigmoid(2.0) + sigmoid(0.0));
    const double mean_1b = 0.5 * (sigmoid(1.0) + sigmoid(-1.0)); // = 0.5
    const double mean_0a = 0.5 * (sigmoid(0.0) + sigmoid(-2.0));
    const double mean_0b = 0.5 * (sigmoid(1.0) + sigmoid(-3.0));
    const double fnr_gap = std::abs((1.0 - mean_1a) - (1.0 - mean_1b));
    const double fpr_gap = std::abs(mean_0a - mean_0b);

    const double c2 = fairtrain::regularizer_value(RegularizerKind::FnrFprGap, model, ds);
    CHECK(c2 == doctest::Approx(fnr_gap + fpr_gap).epsilon(1e-14));

    // the TV form over per-cell Bernoulli means coincides on binary labels
    const double c1 = fairtrain::regularizer_value(RegularizerKind::FDivergence, model, ds);
    CHECK(c1 == doctest::Approx(std::abs(mean_1a - mean_1b) + std::abs(mean_0a - mean_0b))
                    .epsilon(1e-14));
}

TEST_CASE("regularizers reject an empty cell") {
    LabeledDataset ds;
    ds.feature_names = {"x"};
    ds.features = core::Matrix(3, 1, 0.0);
    ds.labels = {1, 1, 0};
    ds.groups = {Group::A, Group::B, Group::A}; // (0,b) missing
    const ClassifierModel model = identity_model();
    CHECK_THROWS_AS(fairtrain::regularizer_value(RegularizerKind::FnrFprGap, model, ds),
                    std::runtime_error);
}

TEST_CASE("total loss gradient matches finite differences for every regularizer") {
    const LabeledDataset ds = testutil::make_skewed_gaussian_dataset(21, 80);
    for (RegularizerKind kind : kAllKinds) {
        ClassifierModel model;
        SeededRng rng(55);
        model.weights.resize(ds.dim());
        for (double& w : model.weights) w = rng.next_uniform(-0.5, 0.5);
        model.bias = rng.next_uniform(-0.5, 0.5);
        const double lambda = 2.5;

        const auto grad = fairtrain::total_loss_gradient(model, ds, kind, lambda);
        for (std::size_t k = 0; k <= model.weights.size(); ++k) {
            double* slot = k < model.weights.size() ? &model.weights[k] : &model.bias;
            const double analytic = k < model.weights.size() ? grad.weights[k] : grad.bias;
            const double fd = testutil::central_diff(
                [&](double v) {
                    const double saved = *slot;
                    *slot = v;
                    const double loss = fairtrain::total_loss(model, ds, kind, lambda);
                    *slot = saved;
                    return loss;
                },
                *slot);
            CHECK(testutil::rel_err(analytic, fd) <= 1e-4);
        }
    }
}

TEST_CASE("unregularized training separates separable data") {
    const LabeledDataset ds = testutil::make_separable_dataset(5, 400);
    TrainConfig cfg;
    cfg.lambda = 0.0;
    cfg.seed = 1;
    const ClassifierModel model = fairtrain::train(ds, cfg);
    const double acc = core::accuracy(fairtrain::predict(model, ds), ds);
    CHECK(acc >= 0.99);
}

TEST_CASE("training is deterministic per seed") {
    const LabeledDataset ds = testutil::make_skewed_gaussian_dataset(31, 200);
    TrainConfig cfg;
    cfg.regularizer = RegularizerKind::Covariance;
    cfg.lambda = 1.0;
    cfg.epochs = 300;
    cfg.seed = 12;
    const ClassifierModel a = fairtrain::train(ds, cfg);
    const ClassifierModel b = fairtrain::train(ds, cfg);
    CHECK(a.weights == b.weights);
    CHECK(a.bias == b.bias);

    cfg.seed = 13;
    const ClassifierModel c = fairtrain::train(ds, cfg);
    CHECK(a.weights != c.weights);
}

TEST_CASE("training lowers the total loss") {
    const LabeledDataset ds = testutil::make_skewed_gaussian_dataset(41, 300);
    for (RegularizerKind kind : kAllKinds) {
        for (double lambda : {0.0, 1.0, 10.0}) {
            TrainConfig cfg;
            cfg.regularizer = kind;
            cfg.lambda = lambda;
            cfg.epochs = 500;
            cfg.seed = 3;
            const ClassifierModel model = fairtrain::train(ds, cfg);

            SeededRng rng(cfg.seed);
            ClassifierModel init;
            init.weights.resize(ds.dim());
            for (double& w : init.weights) w = rng.next_uniform(-0.1, 0.1);
            init.bias = rng.next_uniform(-0.1, 0.1);
            CHECK(fairtrain::total_loss(model, ds, kind, lambda) <=
                  fairtrain::total_loss(init, ds, kind, lambda));
        }
    }
}

TEST_CASE("strong regularization shrinks the empirical EO gap") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const LabeledDataset ds = testutil::make_skewed_gaussian_dataset(seed, 1500);
        for (RegularizerKind kind : kAllKinds) {
            TrainConfig cfg;
            cfg.regularizer = kind;
            cfg.seed = seed;
            cfg.epochs = 1200;

            cfg.lambda = 0.0;
            const auto base = fairtrain::train(ds, cfg);
            cfg.lambda = 10.0;
            const auto reg = fairtrain::train(ds, cfg);

            const double deo_base = core::delta_eo(fairtrain::predict(base, ds), ds);
            const double deo_reg = core::delta_eo(fairtrain::predict(reg, ds), ds);
            CHECK(deo_reg <= deo_base);
        }
    }
}

TEST_CASE("sweep with a single zero lambda reproduces the baseline") {
    const LabeledDataset train_ds = testutil::make_skewed_gaussian_dataset(61, 400);
    const LabeledDataset test_ds = testutil::make_skewed_gaussian_dataset(62, 200);
    TrainConfig cfg;
    cfg.epochs = 400;
    cfg.seed = 4;
    const auto points =
        fairtrain::sweep(train_ds, test_ds, RegularizerKind::FnrFprGap, {0.0}, cfg);
    REQUIRE(points.size() == 1);

    cfg.regularizer = RegularizerKind::FnrFprGap;
    cfg.lambda = 0.0;
    const ClassifierModel base = fairtrain::train(train_ds, cfg);
    CHECK(points[0].train_accuracy ==
          core::accuracy(fairtrain::predict(base, train_ds), train_ds));
    CHECK(points[0].test_delta_eo ==
          core::delta_eo(fairtrain::predict(base, test_ds), test_ds));
    CHECK(points[0].lambda == 0.0);
}

TEST_CASE("test EO gap trends down across the lambda grid") {
    const std::vector<double> lambdas = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
    std::vector<double> mean_deo(lambdas.size(), 0.0);
    const int n_seeds = 5;
    for (std::uint64_t seed = 1; seed <= n_seeds; ++seed) {
        const LabeledDataset train_ds =
            testutil::make_skewed_gaussian_dataset(seed * 100, 1000);
        const LabeledDataset test_ds =
            testutil::make_skewed_gaussian_dataset(seed * 100 + 50, 600);
        TrainConfig cfg;
        cfg.seed = seed;
        cfg.epochs = 1000;
        const auto points =
            fairtrain::sweep(train_ds, test_ds, RegularizerKind::FnrFprGap, lambdas, cfg);
        for (std::size_t i = 0; i < points.size(); ++i)
            mean_deo[i] += points[i].test_delta_eo / n_seeds;
    }
    CHECK(testutil::spearman(lambdas, mean_deo) <= 0.0);
}

TEST_CASE("regularizer names round-trip") {
    for (RegularizerKind kind : kAllKinds)
        CHECK(fairtrain::regularizer_from_name(fairtrain::regularizer_name(kind)) == kind);
    CHECK_THROWS_AS(fairtrain::regularizer_from_name("c9"), std::invalid_argument);
}
