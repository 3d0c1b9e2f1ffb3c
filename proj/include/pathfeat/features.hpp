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

#ifndef PATHFEAT_FEATURES_HPP
#define PATHFEAT_FEATURES_HPP

#include "errors.hpp"
#include "profile.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace pathfeat {

/// A contiguous obstructed stretch of the direct path, in slant meters from Tx.
struct Block {
    double start_slant_m;
    double end_slant_m;

    double length_m() const noexcept { return end_slant_m - start_slant_m; }
};

inline constexpr std::size_t kFeatureCount = 8;

struct FeatureVector {
    double f1_frequency_mhz = 0.0;
    double f2_distance_m = 0.0;
    double f3_total_depth_m = 0.0;
    double f4_first_last_span_m = 0.0;
    double f5_block_count = 0.0;
    double f6_avg_block_depth_m = 0.0;
    double f7_min_edge_dist_m = 0.0;
    double f8_max_edge_dist_m = 0.0;

    std::array<double, kFeatureCount> as_array() const {
        return {f1_frequency_mhz, f2_distance_m,      f3_total_depth_m,   f4_first_last_span_m,
                f5_block_count,   f6_avg_block_depth_m, f7_min_edge_dist_m, f8_max_edge_dist_m};
    }

    static FeatureVector from_array(const std::array<double, kFeatureCount>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
    }

    bool operator==(const FeatureVector&) const = default;
};

/// Maximal runs of negative clearance. Edges sit at the linearly
/// interpolated zero crossing between neighbouring samples.
inline std::vector<Block> detect_blocks(const ClearanceProfile& cp) {
    const auto& x = cp.x_m;
    const auto& c = cp.clearance_m;
    const std::size_t n = c.size();
    std::vector<Block> blocks;

    auto crossing = [&](std::size_t i) {
        // zero of the segment between samples i and i+1 (signs differ)
        const double t = c[i] / (c[i] - c[i + 1]);
        return x[i] + t * (x[i + 1] - x[i]);
    };

    std::size_t i = 0;
    while (i < n) {
        if (!(c[i] < 0.0)) {
            ++i;
            continue;
        }
        const std::size_t first = i;
        while (i < n && c[i] < 0.0) ++i;
        const std::size_t last = i - 1;
        const double start = first == 0 ? x.front() : crossing(first - 1);
        const double end = last + 1 == n ? x.back() : crossing(last);
        blocks.push_back({start * cp.slant_factor, end * cp.slant_factor});
    }
    return blocks;
}

inline FeatureVector features_from_blocks(double frequency_mhz, double distance_m, double slant_length_m,
                                          const std::vector<Block>& blocks) {
    FeatureVector fv;
    fv.f1_frequency_mhz = frequency_mhz;
    fv.f2_distance_m = distance_m;
    if (blocks.empty()) {
        fv.f7_min_edge_dist_m = slant_length_m;
        fv.f8_max_edge_dist_m = slant_length_m;
        return fv;
    }
    double depth = 0.0;
    for (const Block& b : blocks) depth += b.length_m();
    const double to_first = blocks.front().start_slant_m;
    const double from_last = slant_length_m - blocks.back().end_slant_m;
    fv.f3_total_depth_m = depth;
    fv.f4_first_last_span_m = blocks.back().end_slant_m - blocks.front().start_slant_m;
    fv.f5_block_count = static_cast<double>(blocks.size());
    fv.f6_avg_block_depth_m = depth / fv.f5_block_count;
    fv.f7_min_edge_dist_m = std::min(to_first, from_last);
    fv.f8_max_edge_dist_m = std::max(to_first, from_last);
    return fv;
}

/// The eight scalar obstruction features of one link.
///
/// F2 is horizontal; F3, F4, F6, F7 and F8 are measured along the inclined
/// direct path. On an unobstructed link F7 = F8 = slant length and the depth
/// features are zero.
inline FeatureVector extract_features(const PathProfile& p, double radius = kEarthRadiusM) {
    const ClearanceProfile cp = clearance_profile(p, radius);
    return features_from_blocks(p.frequency_mhz, p.distance_m(), cp.slant_length_m(), detect_blocks(cp));
}

/// Leading features for the 4/6/8 "add two" configurations.
inline std::vector<double> select_config(const FeatureVector& fv, int config) {
    if (config != 4 && config != 6 && config != 8)
        throw usage_error("feature config must be 4, 6 or 8 (got " + std::to_string(config) + ")");
    const auto all = fv.as_array();
    return {all.begin(), all.begin() + config};
}

struct OracleScan {
    double total_depth_m = 0.0;
    std::size_t block_count = 0;
};

/// Brute-force reference for the block geometry: resample DSM at
/// spacing/refine by linear interpolation, evaluate the exact chord and
/// curvature at every fine point and count obstructed points. Shares no code
/// with detect_blocks.
inline OracleScan oracle_scan(const PathProfile& p, double radius, int refine) {
    if (refine < 1) throw usage_error("refine must be >= 1");
    validate(p);
    const std::size_t n = p.size();
    const double d = p.distance_m();
    const double h_tx = p.dtm_m.front() + p.tx_height_agl_m;
    const double h_rx = p.dtm_m.back() + p.rx_height_agl_m;
    const double rise = (h_rx - h_tx) / d;
    const double slant = std::sqrt(1.0 + rise * rise);
    const std::size_t fine_count = (n - 1) * static_cast<std::size_t>(refine);
    const double fine_step = p.spacing_m / refine;

    OracleScan out;
    bool inside = false;
    std::size_t obstructed = 0;
    for (std::size_t j = 0; j <= fine_count; ++j) {
        const std::size_t seg = std::min(j / static_cast<std::size_t>(refine), n - 2);
        const double frac = static_cast<double>(j - seg * static_cast<std::size_t>(refine)) / refine;
        const double x = static_cast<double>(j) * fine_step;
        const double surface = p.dsm_m[seg] + frac * (p.dsm_m[seg + 1] - p.dsm_m[seg]);
        const double bulge = std::isinf(radius) ? 0.0 : x * (d - x) / (2.0 * radius);
        const double chord = h_tx + rise * x;
        const bool endpoint = j == 0 || j == fine_count;
        const bool blocked = !endpoint && chord - (surface + bulge) < 0.0;
        if (blocked) {
            ++obstructed;
            if (!inside) ++out.block_count;
        }
        inside = blocked;
    }
    out.total_depth_m = static_cast<double>(obstructed) * fine_step * slant;
    return out;
}

inline double oracle_total_depth(const PathProfile& p, double radius, int refine) {
    return oracle_scan(p, radius, refine).total_depth_m;
}

} // namespace pathfeat

#endif
