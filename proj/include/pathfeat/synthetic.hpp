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

#ifndef PATHFEAT_SYNTHETIC_HPP
#define PATHFEAT_SYNTHETIC_HPP

#include "dataset.hpp"
#include "features.hpp"
#include "metrics.hpp"
#include "seed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace pathfeat {

inline constexpr std::array<double, 6> kSyntheticFrequenciesMhz{449.0, 915.0, 1802.0, 2695.0, 3602.0, 5850.0};

/// Generative label law:
///   FSPL(f, d) + depth * F3 + blocks * log10(1 + F5) + edge * log10(1 + F7) + N(0, noise)
struct LabelLaw {
    double depth_db_per_m = 0.08;
    double blocks_db = 1.5;
    double edge_db = 0.0;

    double operator()(const FeatureVector& fv) const {
        return fspl(fv.f1_frequency_mhz, fv.f2_distance_m) + depth_db_per_m * fv.f3_total_depth_m +
               blocks_db * std::log10(1.0 + fv.f5_block_count) + edge_db * std::log10(1.0 + fv.f7_min_edge_dist_m);
    }
};

struct SyntheticOptions {
    double noise_sd_db = 0.0;
    LabelLaw law{};
    std::size_t group_count = 6;
    std::string group_prefix = "region-";
    double radius_m = kEarthRadiusM;
};

/// Desk-scale stand-in for drive-test data. Terrain is a sum of slow
/// sinusoids over a shallow basin falling away from the Tx site; the surface
/// adds box-shaped buildings, denser around the receiver.
/// Groups differ in hilliness and building density so leave-one-group-out
/// tests see a real (mild) domain shift. Sample i depends only on (seed, i).
class SyntheticGenerator {
public:
    explicit SyntheticGenerator(std::uint64_t seed, SyntheticOptions options = {}) : seed_(seed), opt_(std::move(options)) {
        if (!(opt_.noise_sd_db >= 0.0)) throw usage_error("noise_sd_db must be >= 0");
        if (opt_.group_count < 1) throw usage_error("group_count must be >= 1");
    }

    LinkSample next() { return make(index_++); }

    LinkSample make(std::uint64_t index) const {
        std::mt19937_64 rng(derive_seed(seed_, index, "synthetic"));
        auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
        auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

        const std::size_t group = pick(opt_.group_count);
        const double gfrac = opt_.group_count > 1 ? static_cast<double>(group) / (opt_.group_count - 1) : 0.5;
        const double hill_amp = 1.0 + 2.5 * gfrac;
        const std::size_t max_buildings = 3 + static_cast<std::size_t>(6.0 * (1.0 - gfrac));

        LinkSample s;
        s.group = opt_.group_prefix + std::to_string(group + 1);
        PathProfile& p = s.profile;
        p.frequency_mhz = kSyntheticFrequenciesMhz[pick(kSyntheticFrequenciesMhz.size())];
        p.tx_height_agl_m = uni(17.0, 25.0);
        p.rx_height_agl_m = 2.0;
        const double d = uni(250.0, 50000.0);
        const auto n = static_cast<std::size_t>(std::clamp<long long>(std::llround(d / 20.0) + 1, 32, 257));
        p.spacing_m = d / static_cast<double>(n - 1);

        const double base = uni(0.0, 200.0);
        const double basin = uni(1.0, 1.3);
        const double site_rise = uni(10.0, 50.0);
        std::array<double, 3> amp{}, wavelength{}, phase{};
        for (std::size_t k = 0; k < 3; ++k) {
            amp[k] = uni(0.0, hill_amp);
            wavelength[k] = uni(0.3, 2.0) * d;
            phase[k] = uni(0.0, 2.0 * std::numbers::pi);
        }
        p.dtm_m.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = p.spacing_m * static_cast<double>(i);
            const double from_rx = 1.0 - x / d;
            double h = base + site_rise * from_rx * from_rx * from_rx - basin * x * (d - x) / (2.0 * opt_.radius_m);
            for (std::size_t k = 0; k < 3; ++k) h += amp[k] * std::sin(2.0 * std::numbers::pi * x / wavelength[k] + phase[k]);
            p.dtm_m[i] = h;
        }
        p.dsm_m = p.dtm_m;
        auto add_building = [&](std::size_t centre) {
            const auto half = static_cast<std::size_t>(uni(5.0, 40.0) / p.spacing_m);
            const double height = uni(3.0, 18.0);
            const std::size_t lo = centre > half + 1 ? centre - half : 1;
            const std::size_t hi = std::min(centre + half, n - 2);
            for (std::size_t i = lo; i <= hi; ++i) p.dsm_m[i] = std::max(p.dsm_m[i], p.dtm_m[i] + height);
        };
        const std::size_t buildings = pick(max_buildings + 1);
        for (std::size_t b = 0; b < buildings; ++b) add_building(1 + pick(n - 2));
        // street clutter around the receiver
        const std::size_t near_rx = pick(4);
        const std::size_t zone = std::max<std::size_t>(n / 6, 1);
        for (std::size_t b = 0; b < near_rx; ++b) add_building(n - 1 - (1 + pick(zone)));

        const FeatureVector fv = extract_features(p, opt_.radius_m);
        double label = opt_.law(fv);
        if (opt_.noise_sd_db > 0.0) label += std::normal_distribution<double>(0.0, opt_.noise_sd_db)(rng);
        s.measured_path_loss_db = label;
        return s;
    }

private:
    std::uint64_t seed_;
    SyntheticOptions opt_;
    std::uint64_t index_ = 0;
};

inline std::vector<LinkSample> gen_synthetic(std::size_t n, std::uint64_t seed, double noise_sd_db,
                                             SyntheticOptions options = {}) {
    if (n < 1) throw usage_error("n must be >= 1");
    options.noise_sd_db = noise_sd_db;
    SyntheticGenerator gen(seed, std::move(options));
    std::vector<LinkSample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(gen.next());
    return out;
}

} // namespace pathfeat

#endif
