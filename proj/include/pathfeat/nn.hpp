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

#ifndef PATHFEAT_NN_HPP
#define PATHFEAT_NN_HPP

#include "dataset.hpp"
#include "errors.hpp"
#include "seed.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace pathfeat::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense network: input -> [width, ReLU, dropout] x hidden_layers -> 1 (linear).
struct MlpConfig {
    int input_dim = 8;
    int hidden_layers = 2;
    int hidden_width = 64;
    double dropout_rate = 0.25;

    void validate() const {
        if (input_dim < 1) throw usage_error("input_dim must be >= 1");
        if (hidden_layers < 1) throw usage_error("hidden_layers must be >= 1");
        if (hidden_width < 1) throw usage_error("hidden_width must be >= 1");
        if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw usage_error("dropout_rate must be in [0, 1)");
    }

    bool operator==(const MlpConfig&) const = default;
};

inline std::size_t param_count(int input_dim, int hidden_layers = 2, int hidden_width = 64) {
    if (input_dim < 1 || hidden_layers < 1 || hidden_width < 1) throw usage_error("layer sizes must be >= 1");
    const auto w = static_cast<std::size_t>(hidden_width);
    std::size_t n = static_cast<std::size_t>(input_dim) * w + w;
    n += static_cast<std::size_t>(hidden_layers - 1) * (w * w + w);
    return n + w + 1;
}

struct LayerShape {
    Eigen::Index in = 0;
    Eigen::Index out = 0;
    std::size_t weight_offset = 0;  // out x in, column-major
    std::size_t bias_offset = 0;
};

inline std::vector<LayerShape> layer_shapes(const MlpConfig& c) {
    std::vector<LayerShape> shapes;
    std::size_t offset = 0;
    Eigen::Index in = c.input_dim;
    for (int l = 0; l <= c.hidden_layers; ++l) {
        const Eigen::Index out = l == c.hidden_layers ? 1 : c.hidden_width;
        LayerShape s{in, out, offset, offset + static_cast<std::size_t>(in * out)};
        offset = s.bias_offset + static_cast<std::size_t>(out);
        shapes.push_back(s);
        in = out;
    }
    return shapes;
}

/// Parameters live in one flat vector (weights then bias, layer by layer) so
/// the optimiser and gradient checks can treat them uniformly.
class MlpModel {
public:
    MlpModel() : MlpModel(MlpConfig{}) {}

    explicit MlpModel(const MlpConfig& config)
        : config_(config), shapes_((config.validate(), layer_shapes(config))),
          normalizer_(Normalizer::identity(config.input_dim)),
          params_(nn::param_count(config.input_dim, config.hidden_layers, config.hidden_width), 0.0) {}

    const MlpConfig& config() const noexcept { return config_; }
    const std::vector<LayerShape>& shapes() const noexcept { return shapes_; }
    std::size_t layer_count() const noexcept { return shapes_.size(); }
    std::size_t param_count() const noexcept { return params_.size(); }

    const Normalizer& normalizer() const noexcept { return normalizer_; }
    void set_normalizer(Normalizer n) {
        if (n.dim() != config_.input_dim) throw shape_error("normalizer dimension does not match input_dim");
        normalizer_ = std::move(n);
    }

    std::vector<double>& params() noexcept { return params_; }
    const std::vector<double>& params() const noexcept { return params_; }

    Eigen::Map<const Matrix> weights(std::size_t l) const {
        const auto& s = shapes_[l];
        return {params_.data() + s.weight_offset, s.out, s.in};
    }
    Eigen::Map<Matrix> weights(std::size_t l) {
        const auto& s = shapes_[l];
        return {params_.data() + s.weight_offset, s.out, s.in};
    }
    Eigen::Map<const Vector> bias(std::size_t l) const {
        const auto& s = shapes_[l];
        return {params_.data() + s.bias_offset, s.out};
    }
    Eigen::Map<Vector> bias(std::size_t l) {
        const auto& s = shapes_[l];
        return {params_.data() + s.bias_offset, s.out};
    }

private:
    MlpConfig config_;
    std::vector<LayerShape> shapes_;
    Normalizer normalizer_;
    std::vector<double> params_;
};

/// Glorot-uniform weights, zero biases.
inline MlpModel init_model(const MlpConfig& config, std::uint64_t seed) {
    MlpModel m(config);
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
        const auto& s = m.shapes()[l];
        const double limit = std::sqrt(6.0 / static_cast<double>(s.in + s.out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        auto w = m.weights(l);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
    }
    return m;
}

/// One mask per hidden layer, entries 0 or 1/(1-rate) (inverted dropout).
using DropoutMasks = std::vector<Matrix>;

inline DropoutMasks make_dropout_masks(const MlpConfig& c, Eigen::Index rows, std::uint64_t seed) {
    DropoutMasks masks;
    const double keep_scale = 1.0 / (1.0 - c.dropout_rate);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int l = 0; l < c.hidden_layers; ++l) {
        Matrix m(rows, c.hidden_width);
        if (c.dropout_rate == 0.0) {
            m.setOnes();
        } else {
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = u(rng) < c.dropout_rate ? 0.0 : keep_scale;
        }
        masks.push_back(std::move(m));
    }
    return masks;
}

/// Intermediate values of a training-mode pass, kept for backward().
struct ForwardPass {
    std::vector<Matrix> inputs;       // input to each layer; inputs[0] is the batch
    std::vector<Matrix> pre_activation;  // hidden layers only
    DropoutMasks masks;
    Vector output;
};

namespace detail {

inline void check_inputs(const MlpModel& m, const Matrix& x) {
    if (x.cols() != m.config().input_dim)
        throw shape_error("expected " + std::to_string(m.config().input_dim) + " input columns, got " +
                          std::to_string(x.cols()));
}

inline Matrix affine(const MlpModel& m, std::size_t l, const Matrix& a) {
    Matrix z(a.rows(), m.shapes()[l].out);
    z.noalias() = a * m.weights(l).transpose();
    z.rowwise() += m.bias(l).transpose();
    return z;
}

} // namespace detail

/// Training-mode pass over already-normalised inputs with the given masks.
inline ForwardPass forward_train(const MlpModel& m, const Matrix& x, DropoutMasks masks) {
    detail::check_inputs(m, x);
    const auto hidden = static_cast<std::size_t>(m.config().hidden_layers);
    if (masks.size() != hidden) throw shape_error("one dropout mask per hidden layer required");
    ForwardPass fp;
    fp.inputs.reserve(hidden + 1);
    fp.inputs.push_back(x);
    for (std::size_t l = 0; l < hidden; ++l) {
        if (masks[l].rows() != x.rows() || masks[l].cols() != m.shapes()[l].out)
            throw shape_error("dropout mask shape mismatch");
        Matrix z = detail::affine(m, l, fp.inputs.back());
        fp.inputs.push_back(z.cwiseMax(0.0).cwiseProduct(masks[l]));
        fp.pre_activation.push_back(std::move(z));
    }
    fp.output = detail::affine(m, hidden, fp.inputs.back()).col(0);
    fp.masks = std::move(masks);
    return fp;
}

inline ForwardPass forward_train(const MlpModel& m, const Matrix& x, std::uint64_t dropout_seed) {
    return forward_train(m, x, make_dropout_masks(m.config(), x.rows(), dropout_seed));
}

/// Inference pass over already-normalised inputs: no dropout, no rescaling.
inline Vector forward_normalized(const MlpModel& m, const Matrix& x) {
    detail::check_inputs(m, x);
    Matrix a = x;
    const auto hidden = static_cast<std::size_t>(m.config().hidden_layers);
    for (std::size_t l = 0; l < hidden; ++l) a = detail::affine(m, l, a).cwiseMax(0.0);
    return detail::affine(m, hidden, a).col(0);
}

/// Predictions for raw (un-normalised) features using the model's normaliser.
inline Vector predict(const MlpModel& m, const Matrix& raw) {
    detail::check_inputs(m, raw);
    return forward_normalized(m, m.normalizer().apply(raw));
}

struct Infer {};
struct Train {
    std::uint64_t dropout_seed = 0;
};
using ForwardMode = std::variant<Infer, Train>;

/// Infer takes raw features and applies the baked-in normaliser; Train takes
/// normalised features and applies inverted dropout.
inline Vector forward(const MlpModel& m, const Matrix& inputs, ForwardMode mode) {
    if (const auto* t = std::get_if<Train>(&mode)) return forward_train(m, inputs, t->dropout_seed).output;
    return predict(m, inputs);
}

inline double mse(const Vector& pred, const Vector& target) {
    if (pred.size() != target.size()) throw shape_error("mse: length mismatch");
    if (pred.size() == 0) throw usage_error("mse: empty input");
    return (pred - target).squaredNorm() / static_cast<double>(pred.size());
}

/// d(MSE)/d(params), flat and laid out like MlpModel::params().
inline std::vector<double> backward(const MlpModel& m, const ForwardPass& fp, const Vector& targets) {
    if (targets.size() != fp.output.size()) throw shape_error("backward: target length mismatch");
    if (fp.inputs.size() != m.layer_count()) throw shape_error("backward: forward pass does not match model");
    std::vector<double> grads(m.param_count(), 0.0);
    const double n = static_cast<double>(targets.size());
    Matrix delta = (2.0 / n) * (fp.output - targets);  // n x 1

    for (std::size_t l = m.layer_count(); l-- > 0;) {
        const auto& s = m.shapes()[l];
        Eigen::Map<Matrix> gw(grads.data() + s.weight_offset, s.out, s.in);
        Eigen::Map<Vector> gb(grads.data() + s.bias_offset, s.out);
        gw.noalias() = delta.transpose() * fp.inputs[l];
        gb = delta.colwise().sum().transpose();
        if (l == 0) break;
        Matrix upstream = delta * m.weights(l);  // n x in
        const Matrix& z = fp.pre_activation[l - 1];
        delta = upstream.cwiseProduct(fp.masks[l - 1]).cwiseProduct((z.array() > 0.0).cast<double>().matrix());
    }
    return grads;
}

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

struct AdamConstants {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// One bias-corrected Adam update, in place.
inline void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state, double lr,
                      const AdamConstants& k = {}) {
    if (grads.size() != params.size() || state.m.size() != params.size())
        throw shape_error("adam_step: size mismatch");
    ++state.t;
    const double c1 = 1.0 - std::pow(k.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(k.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = k.beta1 * state.m[i] + (1.0 - k.beta1) * g;
        state.v[i] = k.beta2 * state.v[i] + (1.0 - k.beta2) * g * g;
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + k.epsilon);
    }
}

struct TrainConfig {
    std::size_t batch_size = 8192;
    double learning_rate = 0.001;
    int patience_epochs = 50;
    int max_epochs = 1000;
    double train_fraction = 0.8;
    std::uint64_t seed = 0;

    void validate() const {
        if (batch_size < 1) throw usage_error("batch_size must be >= 1");
        if (!(learning_rate > 0.0)) throw usage_error("learning_rate must be positive");
        if (patience_epochs < 1) throw usage_error("patience_epochs must be >= 1");
        if (max_epochs < 1) throw usage_error("max_epochs must be >= 1");
        if (patience_epochs >= max_epochs) throw usage_error("patience_epochs must be < max_epochs");
        if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw usage_error("train_fraction must be in (0, 1)");
    }
};

struct TrainHistory {
    std::vector<double> train_mse;  // mean training-mode batch loss per epoch
    std::vector<double> val_mse;    // inference-mode validation loss per epoch
    int best_epoch = 0;             // 1-based
    int epochs_run = 0;

    double best_val_mse() const { return val_mse.at(static_cast<std::size_t>(best_epoch - 1)); }
    bool operator==(const TrainHistory&) const = default;
};

struct TrainResult {
    MlpModel model;
    TrainHistory history;
};

/// Fits a model with Adam on MSE, early-stopped on validation loss.
///
/// The normaliser is fitted on `train_x` only and baked into the returned
/// model. Rows are reshuffled every epoch; the final partial batch is kept.
/// Training stops once validation MSE has not improved for
/// `patience_epochs` epochs (or at `max_epochs`) and the parameters from the
/// best validation epoch are restored.
inline TrainResult train(const Matrix& train_x, const Vector& train_y, const Matrix& val_x, const Vector& val_y,
                         const MlpConfig& mc, const TrainConfig& tc, const AccessAudit& audit = {}) {
    mc.validate();
    tc.validate();
    if (train_x.rows() == 0 || val_x.rows() == 0) throw usage_error("train: empty train or validation set");
    if (train_x.rows() != train_y.size() || val_x.rows() != val_y.size())
        throw shape_error("train: feature and target row counts differ");
    if (train_x.cols() != mc.input_dim || val_x.cols() != mc.input_dim)
        throw shape_error("train: feature columns do not match input_dim");

    if (audit) audit(DataRole::train, "fit_normalizer", static_cast<std::size_t>(train_x.rows()));
    MlpModel model = init_model(mc, derive_seed(tc.seed, 0, "init"));
    model.set_normalizer(fit_normalizer(train_x));
    model.bias(model.layer_count() - 1)(0) = train_y.mean();
    const Matrix xn = model.normalizer().apply(train_x);
    const Matrix vn = model.normalizer().apply(val_x);

    std::mt19937_64 rng(derive_seed(tc.seed, 0, "epochs"));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(xn.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    AdamState adam(model.param_count());
    TrainHistory hist;
    std::vector<double> best_params = model.params();
    double best_val = std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (int epoch = 1; epoch <= tc.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
            const std::size_t stop = std::min(order.size(), start + tc.batch_size);
            const std::vector<Eigen::Index> rows(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                 order.begin() + static_cast<std::ptrdiff_t>(stop));
            const Matrix xb = xn(rows, Eigen::all);
            const Vector yb = train_y(rows);
            const ForwardPass fp = forward_train(model, xb, rng());
            loss_sum += (fp.output - yb).squaredNorm();
            adam_step(model.params(), backward(model, fp, yb), adam, tc.learning_rate);
        }
        if (audit) audit(DataRole::validation, "early_stopping", static_cast<std::size_t>(vn.rows()));
        const double val = mse(forward_normalized(model, vn), val_y);
        hist.train_mse.push_back(loss_sum / static_cast<double>(order.size()));
        hist.val_mse.push_back(val);
        hist.epochs_run = epoch;
        if (val < best_val) {
            best_val = val;
            best_params = model.params();
            hist.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= tc.patience_epochs) {
            break;
        }
    }
    model.params() = std::move(best_params);
    return {std::move(model), std::move(hist)};
}

inline constexpr std::string_view kModelFormat = "pathfeat-mlp";
inline constexpr int kModelVersion = 1;

inline nlohmann::json model_to_json(const MlpModel& m) {
    const auto& c = m.config();
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < m.layer_count(); ++l) {
        const auto& s = m.shapes()[l];
        const auto first = m.params().begin();
        layers.push_back({
            {"in", s.in},
            {"out", s.out},
            {"weights_col_major", std::vector<double>(first + static_cast<std::ptrdiff_t>(s.weight_offset),
                                                      first + static_cast<std::ptrdiff_t>(s.bias_offset))},
            {"bias", std::vector<double>(first + static_cast<std::ptrdiff_t>(s.bias_offset),
                                         first + static_cast<std::ptrdiff_t>(s.bias_offset + static_cast<std::size_t>(s.out)))},
        });
    }
    const Normalizer& nz = m.normalizer();
    return {
        {"format", kModelFormat},
        {"version", kModelVersion},
        {"config",
         {{"input_dim", c.input_dim},
          {"hidden_layers", c.hidden_layers},
          {"hidden_width", c.hidden_width},
          {"dropout_rate", c.dropout_rate}}},
        {"param_count", m.param_count()},
        {"normalizer",
         {{"mean", std::vector<double>(nz.mean.data(), nz.mean.data() + nz.mean.size())},
          {"sd", std::vector<double>(nz.sd.data(), nz.sd.data() + nz.sd.size())}}},
        {"layers", layers},
    };
}

inline MlpModel model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != kModelFormat) throw validation_error("not a pathfeat model file");
        if (j.at("version").get<int>() != kModelVersion)
            throw validation_error("unsupported model version " + j.at("version").dump());
        const auto& jc = j.at("config");
        MlpConfig c;
        c.input_dim = jc.at("input_dim").get<int>();
        c.hidden_layers = jc.at("hidden_layers").get<int>();
        c.hidden_width = jc.at("hidden_width").get<int>();
        c.dropout_rate = jc.at("dropout_rate").get<double>();
        MlpModel m(c);
        if (j.at("param_count").get<std::size_t>() != m.param_count())
            throw validation_error("param_count " + j.at("param_count").dump() + " does not match config");
        const auto mean = j.at("normalizer").at("mean").get<std::vector<double>>();
        const auto sd = j.at("normalizer").at("sd").get<std::vector<double>>();
        if (mean.size() != sd.size()) throw validation_error("normalizer mean/sd lengths differ");
        Normalizer nz{Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size())),
                      Eigen::Map<const Vector>(sd.data(), static_cast<Eigen::Index>(sd.size()))};
        for (double v : sd)
            if (!(v > 0.0)) throw validation_error("normalizer sd must be positive");
        m.set_normalizer(std::move(nz));
        const auto& jl = j.at("layers");
        if (jl.size() != m.layer_count()) throw validation_error("layer count does not match config");
        for (std::size_t l = 0; l < m.layer_count(); ++l) {
            const auto& s = m.shapes()[l];
            const auto w = jl[l].at("weights_col_major").get<std::vector<double>>();
            const auto b = jl[l].at("bias").get<std::vector<double>>();
            if (jl[l].at("in").get<Eigen::Index>() != s.in || jl[l].at("out").get<Eigen::Index>() != s.out ||
                w.size() != static_cast<std::size_t>(s.in * s.out) || b.size() != static_cast<std::size_t>(s.out))
                throw validation_error("layer " + std::to_string(l) + " shape does not match config");
            std::copy(w.begin(), w.end(), m.params().begin() + static_cast<std::ptrdiff_t>(s.weight_offset));
            std::copy(b.begin(), b.end(), m.params().begin() + static_cast<std::ptrdiff_t>(s.bias_offset));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("malformed model file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw validation_error(std::string("malformed model file: ") + e.what());
    }
}

inline void save_model(std::ostream& out, const MlpModel& m) { out << model_to_json(m).dump(1) << '\n'; }

inline MlpModel load_model(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("malformed model file: ") + e.what());
    }
    return model_from_json(j);
}

} // namespace pathfeat::nn

#endif
