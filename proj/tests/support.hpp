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

// Shared fixtures for the unit and acceptance suites.

#ifndef PATHFEAT_TESTS_SUPPORT_HPP
#define PATHFEAT_TESTS_SUPPORT_HPP

#include "pathfeat/dataset.hpp"
#include "pathfeat/nn.hpp"
#include "pathfeat/profile.hpp"
#include "pathfeat/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pathfeat::testing {

/// Flat terrain at height 0 with dsm == dtm.
inline PathProfile flat_profile(std::size_t n, double spacing, double tx, double rx, double f = 915.0) {
    PathProfile p;
    p.spacing_m = spacing;
    p.dsm_m.assign(n, 0.0);
    p.dtm_m.assign(n, 0.0);
    p.tx_height_agl_m = tx;
    p.rx_height_agl_m = rx;
    p.frequency_mhz = f;
    return p;
}

/// Random rough profile: integer-free heights, buildings of random width,
/// antennas low enough that most links are obstructed.
inline PathProfile random_profile(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> n_dist(8, 200);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = n_dist(rng);
    PathProfile p;
    p.spacing_m = 5.0 + 45.0 * u(rng);
    p.frequency_mhz = kSyntheticFrequenciesMhz[static_cast<std::size_t>(u(rng) * 6.0) % 6];
    p.tx_height_agl_m = 2.0 + 30.0 * u(rng);
    p.rx_height_agl_m = 1.0 + 10.0 * u(rng);
    const double base = 100.0 * u(rng);
    const double tilt = 20.0 * (u(rng) - 0.5);
    const double phase = 6.283 * u(rng);
    const double amp = 15.0 * u(rng);
    p.dtm_m.resize(n);
    p.dsm_m.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        p.dtm_m[i] = base + tilt * t + amp * std::sin(3.0 * t * 6.283 + phase);
        p.dsm_m[i] = p.dtm_m[i];
    }
    const int buildings = static_cast<int>(u(rng) * 6.0);
    for (int b = 0; b < buildings; ++b) {
        const std::size_t c = 1 + static_cast<std::size_t>(u(rng) * static_cast<double>(n - 2));
        const std::size_t w = static_cast<std::size_t>(u(rng) * 4.0);
        const double h = 3.0 + 25.0 * u(rng);
        for (std::size_t i = c > w ? c - w : 1; i <= std::min(c + w, n - 2); ++i) p.dsm_m[i] = p.dtm_m[i] + h;
    }
    return p;
}

/// Synthetic-generator profiles mixed with rough random ones.
inline std::vector<PathProfile> profile_corpus(std::size_t n, std::uint64_t seed) {
    std::vector<PathProfile> out;
    std::mt19937_64 rng(seed);
    SyntheticGenerator gen(seed, SyntheticOptions{});
    for (std::size_t i = 0; i < n; ++i) out.push_back(i % 2 == 0 ? gen.next().profile : random_profile(rng));
    return out;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-9) {
    return std::abs(a - b) <= std::max(abs_floor, rel * std::max(std::abs(a), std::abs(b)));
}

struct GradientCheck {
    double max_rel_error = 0.0;
    std::size_t checked = 0;
    std::size_t skipped = 0;  // perturbation moved a rectifier input across zero
};

/// Central differences of the batch MSE against nn::backward, parameter by
/// parameter, with the dropout masks held fixed.
inline GradientCheck gradient_check(const nn::MlpModel& model, const nn::Matrix& x, const nn::Vector& y,
                                    const nn::DropoutMasks& masks, double eps = 1e-5) {
    const auto fp = nn::forward_train(model, x, masks);
    const std::vector<double> analytic = nn::backward(model, fp, y);
    auto pattern = [](const nn::ForwardPass& f) {
        std::vector<bool> on;
        for (const auto& z : f.pre_activation)
            for (Eigen::Index k = 0; k < z.size(); ++k) on.push_back(z.data()[k] > 0.0);
        return on;
    };
    const std::vector<bool> base = pattern(fp);
    GradientCheck out;
    nn::MlpModel probe = model;
    for (std::size_t i = 0; i < probe.param_count(); ++i) {
        const double keep = probe.params()[i];
        probe.params()[i] = keep + eps;
        const auto plus = nn::forward_train(probe, x, masks);
        probe.params()[i] = keep - eps;
        const auto minus = nn::forward_train(probe, x, masks);
        probe.params()[i] = keep;
        if (pattern(plus) != base || pattern(minus) != base) {
            ++out.skipped;
            continue;
        }
        const double lp = (plus.output - y).squaredNorm() / static_cast<double>(y.size());
        const double lm = (minus.output - y).squaredNorm() / static_cast<double>(y.size());
        const double numeric = (lp - lm) / (2.0 * eps);
        const double scale = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6});
        out.max_rel_error = std::max(out.max_rel_error, std::abs(numeric - analytic[i]) / scale);
        ++out.checked;
    }
    return out;
}

/// Random model, batch, targets and dropout masks for gradient checks.
struct GradientCase {
    nn::MlpModel model;
    nn::Matrix x;
    nn::Vector y;
    nn::DropoutMasks masks;
};

inline GradientCase random_gradient_case(std::uint64_t seed, const nn::MlpConfig& config, Eigen::Index rows = 4) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    GradientCase c{nn::init_model(config, seed), nn::Matrix(rows, config.input_dim), nn::Vector(rows), {}};
    for (auto& b : c.model.params())
        if (b == 0.0) b = 0.1 * g(rng);  // biases start at zero; move them off it
    for (Eigen::Index k = 0; k < c.x.size(); ++k) c.x.data()[k] = g(rng);
    for (Eigen::Index k = 0; k < c.y.size(); ++k) c.y(k) = g(rng);
    c.masks = nn::make_dropout_masks(config, rows, seed ^ 0x5bd1e995u);
    return c;
}

} // namespace pathfeat::testing

#endif
