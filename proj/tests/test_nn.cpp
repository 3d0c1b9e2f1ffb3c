// SPDX-License-Identifier: Apache-2.0
//
// pathfeat: obstruction features and dense-network path loss modelling
// Copyright (C) 2026 The pathfeat authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "pathfeat/feature_table.hpp"
#include "pathfeat/nn.hpp"
#include "pathfeat/synthetic.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace pf = pathfeat;
namespace nn = pathfeat::nn;

namespace {

nn::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    nn::Matrix m(rows, cols);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = g(rng);
    return m;
}

TEST(ParamCount, AddTwoConfigurations) {
    EXPECT_EQ(nn::param_count(8), 4801u);
    EXPECT_EQ(nn::param_count(6), 4673u);
    EXPECT_EQ(nn::param_count(4), 4545u);
    for (int d : {4, 6, 8}) {
        nn::MlpConfig c;
        c.input_dim = d;
        EXPECT_EQ(nn::MlpModel(c).param_count(), static_cast<std::size_t>((d * 64 + 64) + (64 * 64 + 64) + 65));
    }
}

TEST(Config, Validation) {
    nn::MlpConfig c;
    c.dropout_rate = 1.0;
    EXPECT_THROW(c.validate(), pf::usage_error);
    c = {};
    c.input_dim = 0;
    EXPECT_THROW(c.validate(), pf::usage_error);
    nn::TrainConfig t;
    EXPECT_NO_THROW(t.validate());
    t.patience_epochs = t.max_epochs;
    EXPECT_THROW(t.validate(), pf::usage_error);
    t = {};
    t.batch_size = 0;
    EXPECT_THROW(t.validate(), pf::usage_error);
    t = {};
    t.learning_rate = 0.0;
    EXPECT_THROW(t.validate(), pf::usage_error);
}

TEST(LayerShapes, ChainInputToOne) {
    const auto shapes = nn::layer_shapes(nn::MlpConfig{});
    ASSERT_EQ(shapes.size(), 3u);
    EXPECT_EQ(shapes[0].in, 8);
    EXPECT_EQ(shapes[0].out, 64);
    EXPECT_EQ(shapes[1].in, 64);
    EXPECT_EQ(shapes[1].out, 64);
    EXPECT_EQ(shapes[2].in, 64);
    EXPECT_EQ(shapes[2].out, 1);
    EXPECT_EQ(shapes[2].bias_offset + 1, 4801u);
}

TEST(Init, DeterministicAndWithinGlorotBound) {
    const nn::MlpConfig c;
    const auto a = nn::init_model(c, 1);
    EXPECT_EQ(a.params(), nn::init_model(c, 1).params());
    EXPECT_NE(a.params(), nn::init_model(c, 2).params());
    for (std::size_t l = 0; l < a.layer_count(); ++l) {
        const auto& s = a.shapes()[l];
        const double bound = std::sqrt(6.0 / static_cast<double>(s.in + s.out));
        EXPECT_LE(a.weights(l).cwiseAbs().maxCoeff(), bound);
        EXPECT_GT(a.weights(l).cwiseAbs().maxCoeff(), 0.5 * bound);
        EXPECT_TRUE(a.bias(l).isZero(0.0));
    }
}

TEST(Forward, ZeroModelPredictsZero) {
    const nn::MlpModel m{nn::MlpConfig{}};
    const auto x = random_matrix(10, 8, 1);
    EXPECT_TRUE(nn::forward(m, x, nn::Infer{}).isZero(0.0));
    EXPECT_TRUE(nn::forward(m, x, nn::Train{7}).isZero(0.0));
}

TEST(Forward, NoDropoutTrainEqualsInfer) {
    nn::MlpConfig c;
    c.dropout_rate = 0.0;
    const auto m = nn::init_model(c, 3);
    const auto x = random_matrix(32, 8, 2);
    EXPECT_EQ(nn::forward(m, x, nn::Train{99}), nn::forward(m, x, nn::Infer{}));
}

TEST(Forward, HandComputedNetwork) {
    // 2 -> 2 -> 2 -> 1, small enough to evaluate by hand
    nn::MlpConfig c{2, 2, 2, 0.0};
    nn::MlpModel m(c);
    m.weights(0) << 1.0, -1.0, 0.5, 2.0;  // rows are output units
    m.bias(0) << 0.0, -1.0;
    m.weights(1) << 1.0, 0.0, 1.0, 1.0;
    m.bias(1) << 0.5, 0.0;
    m.weights(2) << 2.0, -3.0;
    m.bias(2) << 1.0;
    nn::Matrix x(2, 2);
    x << 3.0, 1.0,   // h1 = relu(2, 2.5) = (2, 2.5); h2 = relu(2.5, 4.5); y = 5 - 13.5 + 1
        -1.0, 1.0;   // h1 = relu(-2, 0.5) = (0, 0.5); h2 = relu(0.5, 0.5); y = 1 - 1.5 + 1
    const nn::Vector y = nn::forward(m, x, nn::Infer{});
    EXPECT_DOUBLE_EQ(y(0), -7.5);
    EXPECT_DOUBLE_EQ(y(1), 0.5);
}

TEST(Forward, InferAppliesNormalizer) {
    auto m = nn::init_model(nn::MlpConfig{}, 5);
    const nn::Matrix raw = random_matrix(20, 8, 6) * 50.0;
    m.set_normalizer(pf::fit_normalizer(raw));
    EXPECT_EQ(nn::predict(m, raw), nn::forward_normalized(m, m.normalizer().apply(raw)));
}

TEST(Forward, ShapeMismatch) {
    const auto m = nn::init_model(nn::MlpConfig{}, 5);
    EXPECT_THROW(nn::forward(m, random_matrix(3, 6, 1), nn::Infer{}), pf::shape_error);
    EXPECT_THROW(nn::forward(m, random_matrix(3, 6, 1), nn::Train{1}), pf::shape_error);
    nn::Vector y(3);
    EXPECT_THROW(nn::mse(y, nn::Vector(2)), pf::shape_error);
}

TEST(Dropout, MaskValuesAndKeepRate) {
    const nn::MlpConfig c;
    const auto masks = nn::make_dropout_masks(c, 2000, 4);
    ASSERT_EQ(masks.size(), 2u);
    for (const auto& mk : masks) {
        std::size_t zeros = 0;
        for (Eigen::Index k = 0; k < mk.size(); ++k) {
            const double v = mk.data()[k];
            EXPECT_TRUE(v == 0.0 || v == 1.0 / 0.75);
            zeros += v == 0.0;
        }
        EXPECT_NEAR(static_cast<double>(zeros) / static_cast<double>(mk.size()), 0.25, 0.005);
        EXPECT_NEAR(mk.mean(), 1.0, 0.01);
    }
}

TEST(Dropout, ExpectedOutputMatchesInference) {
    // single dropout layer between a fixed activation and the linear output
    nn::MlpConfig c{8, 1, 64, 0.25};
    auto m = nn::init_model(c, 21);
    const auto x = random_matrix(5, 8, 22);
    const nn::Vector infer = nn::forward_normalized(m, x);
    nn::Vector sum = nn::Vector::Zero(5);
    const int draws = 20000;
    for (int k = 0; k < draws; ++k) sum += nn::forward_train(m, x, static_cast<std::uint64_t>(k)).output;
    const nn::Vector mean = sum / draws;
    for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(mean(i), infer(i), 0.02 * std::abs(infer(i)) + 1e-3);
}

TEST(Dropout, LastHiddenLayerIsUnbiasedInTheFullNetwork) {
    const nn::MlpConfig c;
    auto m = nn::init_model(c, 31);
    for (auto& b : m.params()) b += 0.05;  // keep hidden units active
    const auto x = random_matrix(4, 8, 32);
    const nn::Vector infer = nn::forward_normalized(m, x);
    // per-draw variance of w . (h * mask): sum_j (w_j h_j)^2 * p / (1 - p)
    nn::DropoutMasks ones = nn::make_dropout_masks(c, 4, 0);
    for (auto& mk : ones) mk.setOnes();
    const nn::Matrix h = nn::forward_train(m, x, ones).inputs.back();
    const nn::Matrix wh = h.array().rowwise() * m.weights(2).row(0).array();
    const nn::Vector var = wh.array().square().rowwise().sum() * (c.dropout_rate / (1.0 - c.dropout_rate));
    nn::Vector sum = nn::Vector::Zero(4);
    const int draws = 20000;
    for (int k = 0; k < draws; ++k) {
        auto masks = nn::make_dropout_masks(c, 4, static_cast<std::uint64_t>(k));
        masks[0].setOnes();
        sum += nn::forward_train(m, x, std::move(masks)).output;
    }
    const nn::Vector mean = sum / draws;
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(mean(i), infer(i), 5.0 * std::sqrt(var(i) / draws));
}

TEST(Mse, Values) {
    nn::Vector p(2), t(2);
    p << 3.0, -4.0;
    t << 0.0, 0.0;
    EXPECT_EQ(nn::mse(p, t), 12.5);
    EXPECT_EQ(nn::mse(t, t), 0.0);
    EXPECT_EQ(nn::mse(2.0 * p, t), 4.0 * nn::mse(p, t));
    EXPECT_THROW(nn::mse(nn::Vector(), nn::Vector()), pf::usage_error);
}

TEST(Backward, ZeroResidualGivesZeroGradient) {
    const auto m = nn::init_model(nn::MlpConfig{}, 2);
    const auto x = random_matrix(6, 8, 3);
    const auto fp = nn::forward_train(m, x, 4);
    for (double g : nn::backward(m, fp, fp.output)) EXPECT_EQ(g, 0.0);
}

TEST(Backward, OutputBiasIsMeanOfTwiceResidual) {
    const auto m = nn::init_model(nn::MlpConfig{}, 2);
    const auto x = random_matrix(6, 8, 3);
    const nn::Vector y = random_matrix(6, 1, 9).col(0);
    const auto fp = nn::forward_train(m, x, 4);
    const auto g = nn::backward(m, fp, y);
    EXPECT_NEAR(g.back(), (2.0 * (fp.output - y)).mean(), 1e-14);
}

TEST(Backward, MatchesCentralDifferences) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        nn::MlpConfig c;
        c.input_dim = 4 + 2 * static_cast<int>(seed % 3);
        c.hidden_width = 16;
        auto gc = pf::testing::random_gradient_case(seed, c);
        const auto r = pf::testing::gradient_check(gc.model, gc.x, gc.y, gc.masks);
        EXPECT_LT(r.max_rel_error, 1e-4) << "seed " << seed;
        EXPECT_GT(r.checked, r.skipped * 10);
    }
}

TEST(Adam, ZeroGradientLeavesParameters) {
    std::vector<double> p{1.0, -2.0, 3.0};
    nn::AdamState s(3);
    nn::adam_step(p, {0.0, 0.0, 0.0}, s, 0.001);
    EXPECT_EQ(p, (std::vector<double>{1.0, -2.0, 3.0}));
    EXPECT_EQ(s.t, 1u);
}

TEST(Adam, FirstStepIsLearningRateTimesSign) {
    std::vector<double> p{0.0, 0.0, 0.0};
    nn::AdamState s(3);
    nn::adam_step(p, {0.3, -7.0, 1e-3}, s, 0.001);
    EXPECT_NEAR(p[0], -0.001, 1e-10);
    EXPECT_NEAR(p[1], 0.001, 1e-10);
    EXPECT_NEAR(p[2], -0.001, 1e-8);
}

TEST(Adam, SecondStepMatchesClosedForm) {
    std::vector<double> p{0.0};
    nn::AdamState s(1);
    nn::adam_step(p, {2.0}, s, 0.01);
    nn::adam_step(p, {1.0}, s, 0.01);
    const double first = -0.01 * 2.0 / (2.0 + 1e-8);
    const double m = (0.9 * 0.1 * 2.0 + 0.1 * 1.0) / (1.0 - 0.81);
    const double v = (0.999 * 0.001 * 4.0 + 0.001 * 1.0) / (1.0 - 0.999 * 0.999);
    EXPECT_NEAR(p[0], first - 0.01 * m / (std::sqrt(v) + 1e-8), 1e-15);
}

TEST(Adam, Reproducible) {
    std::vector<double> a{1.0, 2.0}, b{1.0, 2.0};
    nn::AdamState sa(2), sb(2);
    for (int k = 0; k < 5; ++k) {
        nn::adam_step(a, {0.5, -0.25}, sa, 0.01);
        nn::adam_step(b, {0.5, -0.25}, sb, 0.01);
    }
    EXPECT_EQ(a, b);
}

struct Data {
    Eigen::MatrixXd tx, vx;
    Eigen::VectorXd ty, vy;
};

Data synthetic_split(std::size_t n, std::uint64_t seed, double noise) {
    const auto t = pf::extract_table(pf::gen_synthetic(n, seed, noise));
    const auto s = pf::split_indices(t.size(), 0.8, seed);
    return {t.matrix(8, s.train), t.matrix(8, s.validation), t.targets(s.train), t.targets(s.validation)};
}

TEST(Train, RestoresBestValidationParameters) {
    const auto d = synthetic_split(600, 1, 1.0);
    nn::TrainConfig tc;
    tc.batch_size = 64;
    tc.max_epochs = 60;
    tc.patience_epochs = 5;
    tc.learning_rate = 0.01;
    tc.seed = 3;
    const auto r = nn::train(d.tx, d.ty, d.vx, d.vy, nn::MlpConfig{}, tc);
    const auto& h = r.history;
    ASSERT_EQ(h.val_mse.size(), static_cast<std::size_t>(h.epochs_run));
    ASSERT_EQ(h.train_mse.size(), static_cast<std::size_t>(h.epochs_run));
    EXPECT_LE(h.best_epoch, h.epochs_run);
    EXPECT_EQ(h.best_val_mse(), *std::min_element(h.val_mse.begin(), h.val_mse.end()));
    EXPECT_NEAR(nn::mse(nn::predict(r.model, d.vx), d.vy), h.best_val_mse(), 1e-9);
}

TEST(Train, PatienceOneStopsEarly) {
    const auto d = synthetic_split(400, 2, 3.0);
    nn::TrainConfig tc;
    tc.batch_size = 16;
    tc.max_epochs = 500;
    tc.patience_epochs = 1;
    tc.learning_rate = 0.05;
    const auto r = nn::train(d.tx, d.ty, d.vx, d.vy, nn::MlpConfig{}, tc);
    EXPECT_LT(r.history.epochs_run, 500);
    EXPECT_EQ(r.history.best_epoch + 1, r.history.epochs_run);
}

TEST(Train, DeterministicHistory) {
    const auto d = synthetic_split(300, 4, 1.0);
    nn::TrainConfig tc;
    tc.batch_size = 32;
    tc.max_epochs = 15;
    tc.patience_epochs = 5;
    tc.seed = 11;
    const auto a = nn::train(d.tx, d.ty, d.vx, d.vy, nn::MlpConfig{}, tc);
    const auto b = nn::train(d.tx, d.ty, d.vx, d.vy, nn::MlpConfig{}, tc);
    EXPECT_EQ(a.history.train_mse, b.history.train_mse);
    EXPECT_EQ(a.history.val_mse, b.history.val_mse);
    EXPECT_EQ(a.model.params(), b.model.params());
    tc.seed = 12;
    EXPECT_NE(nn::train(d.tx, d.ty, d.vx, d.vy, nn::MlpConfig{}, tc).history.val_mse, a.history.val_mse);
}

TEST(Train, LossDecreasesOnNoiselessTask) {
    const auto d = synthetic_split(1000, 6, 0.0);
    for (std::uint64_t seed : {1, 2, 3}) {
        nn::TrainConfig tc;
        tc.batch_size = 128;
        tc.max_epochs = 20;
        tc.patience_epochs = 19;
        tc.seed = seed;
        const auto r = nn::train(d.tx, d.ty, d.vx, d.vy, nn::MlpConfig{}, tc);
        ASSERT_EQ(r.history.train_mse.size(), 20u);
        EXPECT_LT(r.history.train_mse[19], r.history.train_mse[0]);
    }
}

TEST(Train, NormalizerSeesTrainingRowsOnly) {
    const auto d = synthetic_split(200, 8, 1.0);
    std::vector<std::tuple<pf::DataRole, std::string, std::size_t>> log;
    nn::TrainConfig tc;
    tc.max_epochs = 3;
    tc.patience_epochs = 2;
    const auto r = nn::train(d.tx, d.ty, d.vx, d.vy, nn::MlpConfig{}, tc,
                             [&](pf::DataRole role, std::string_view purpose, std::size_t rows) {
                                 log.emplace_back(role, std::string(purpose), rows);
                             });
    EXPECT_EQ(r.model.normalizer(), pf::fit_normalizer(d.tx));
    ASSERT_FALSE(log.empty());
    EXPECT_EQ(log.front(), std::make_tuple(pf::DataRole::train, std::string("fit_normalizer"),
                                           static_cast<std::size_t>(d.tx.rows())));
    for (std::size_t k = 1; k < log.size(); ++k) {
        EXPECT_EQ(std::get<0>(log[k]), pf::DataRole::validation);
        EXPECT_EQ(std::get<1>(log[k]), "early_stopping");
    }
}

TEST(Train, RejectsEmptyOrMismatchedSets) {
    const auto d = synthetic_split(50, 9, 1.0);
    EXPECT_THROW(nn::train(d.tx, d.ty, d.vx.topRows(0), d.vy.head(0), nn::MlpConfig{}, nn::TrainConfig{}),
                 pf::usage_error);
    EXPECT_THROW(nn::train(d.tx.leftCols(6), d.ty, d.vx, d.vy, nn::MlpConfig{}, nn::TrainConfig{}), pf::shape_error);
}

TEST(Train, LearnsNoiselessLawBelowOneDecibel) {
    const auto d = synthetic_split(20000, 10, 0.0);
    nn::TrainConfig tc;
    tc.batch_size = 256;
    tc.max_epochs = 400;
    tc.patience_epochs = 50;
    tc.seed = 1;
    const auto r = nn::train(d.tx, d.ty, d.vx, d.vy, nn::MlpConfig{}, tc);
    EXPECT_LT(std::sqrt(r.history.best_val_mse()), 1.0);
}

TEST(Persistence, RoundTripIsBitwise) {
    const auto d = synthetic_split(300, 12, 1.0);
    nn::TrainConfig tc;
    tc.batch_size = 64;
    tc.max_epochs = 5;
    tc.patience_epochs = 2;
    const auto r = nn::train(d.tx, d.ty, d.vx, d.vy, nn::MlpConfig{}, tc);
    std::stringstream io;
    nn::save_model(io, r.model);
    const auto back = nn::load_model(io);
    EXPECT_EQ(back.params(), r.model.params());
    EXPECT_EQ(back.normalizer(), r.model.normalizer());
    EXPECT_EQ(back.config(), r.model.config());
    EXPECT_EQ(nn::predict(back, d.vx), nn::predict(r.model, d.vx));
    const auto j = nn::model_to_json(r.model);
    EXPECT_EQ(j["param_count"], 4801);
    EXPECT_EQ(j["format"], "pathfeat-mlp");
}

TEST(Persistence, RejectsDamagedFiles) {
    auto j = nn::model_to_json(nn::init_model(nn::MlpConfig{}, 1));
    auto wrong_count = j;
    wrong_count["param_count"] = 4800;
    EXPECT_THROW(nn::model_from_json(wrong_count), pf::validation_error);
    auto wrong_format = j;
    wrong_format["format"] = "other";
    EXPECT_THROW(nn::model_from_json(wrong_format), pf::validation_error);
    auto short_layer = j;
    short_layer["layers"][1]["bias"].erase(0);
    EXPECT_THROW(nn::model_from_json(short_layer), pf::validation_error);
    std::istringstream junk("{not json");
    EXPECT_THROW(nn::load_model(junk), pf::validation_error);
}

} // namespace
