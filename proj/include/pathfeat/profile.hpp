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

#ifndef PATHFEAT_PROFILE_HPP
#define PATHFEAT_PROFILE_HPP

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathfeat {

/// Mean Earth radius used for curvature correction (meters).
inline constexpr double kEarthRadiusM = 6371000.0;

/// Heights sampled along the Tx->Rx cut. Heights are above sea level, antenna
/// heights above ground at the two endpoints.
struct PathProfile {
    double spacing_m = 1.0;
    std::vector<double> dsm_m;
    std::vector<double> dtm_m;
    double tx_height_agl_m = 1.0;
    double rx_height_agl_m = 1.0;
    double frequency_mhz = 1.0;

    std::size_t size() const noexcept { return dsm_m.size(); }
    double distance_m() const noexcept { return spacing_m * static_cast<double>(size() - 1); }
    double tx_height_abs_m() const { return dtm_m.front() + tx_height_agl_m; }
    double rx_height_abs_m() const { return dtm_m.back() + rx_height_agl_m; }
};

/// Throws validation_error naming the first violated invariant.
inline void validate(const PathProfile& p) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(p.spacing_m)) throw validation_error("spacing_m must be positive");
    if (!positive(p.tx_height_agl_m)) throw validation_error("tx_height_agl_m must be positive");
    if (!positive(p.rx_height_agl_m)) throw validation_error("rx_height_agl_m must be positive");
    if (!positive(p.frequency_mhz)) throw validation_error("frequency_mhz must be positive");
    if (p.dsm_m.size() != p.dtm_m.size())
        throw validation_error("dsm_m and dtm_m lengths differ (" + std::to_string(p.dsm_m.size()) + " vs " +
                               std::to_string(p.dtm_m.size()) + ")");
    if (p.dsm_m.size() < 2) throw validation_error("profile needs at least 2 samples");
    for (std::size_t i = 0; i < p.dsm_m.size(); ++i) {
        if (!std::isfinite(p.dsm_m[i]) || !std::isfinite(p.dtm_m[i]))
            throw validation_error("non-finite height at sample " + std::to_string(i));
        if (p.dsm_m[i] < p.dtm_m[i])
            throw validation_error("dsm below dtm at sample " + std::to_string(i));
    }
}

/// The same link seen from the receiver.
inline PathProfile reversed(const PathProfile& p) {
    PathProfile r = p;
    std::reverse(r.dsm_m.begin(), r.dsm_m.end());
    std::reverse(r.dtm_m.begin(), r.dtm_m.end());
    std::swap(r.tx_height_agl_m, r.rx_height_agl_m);
    return r;
}

/// Bulge of the Earth above the straight Tx-Rx chord at offset x.
inline double curvature_drop(double x, double d, double radius) {
    if (!(radius > 0.0)) throw std::domain_error("curvature_drop: radius must be positive");
    if (!(x >= 0.0 && x <= d)) throw std::domain_error("curvature_drop: x outside [0, d]");
    if (std::isinf(radius)) return 0.0;
    return x * (d - x) / (2.0 * radius);
}

/// Height of the direct path above sea level at each sample.
inline std::vector<double> direct_path_heights(const PathProfile& p) {
    validate(p);
    const double h_tx = p.tx_height_abs_m();
    const double h_rx = p.rx_height_abs_m();
    const std::size_t n = p.size();
    const double last = static_cast<double>(n - 1);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        // symmetric lerp form keeps reversed profiles bit-close
        const double t = static_cast<double>(i) / last;
        const double u = static_cast<double>(n - 1 - i) / last;
        h[i] = h_tx * u + h_rx * t;
    }
    return h;
}

struct ClearanceProfile {
    std::vector<double> x_m;
    std::vector<double> clearance_m;
    double slant_factor = 1.0;

    double horizontal_length_m() const { return x_m.back(); }
    double slant_length_m() const { return x_m.back() * slant_factor; }
};

inline double slant_factor(const PathProfile& p) {
    const double rise = (p.rx_height_abs_m() - p.tx_height_abs_m()) / p.distance_m();
    return std::sqrt(1.0 + rise * rise);
}

/// Direct-path height minus curvature-corrected DSM at every sample.
///
/// Negative clearance means the surface pierces the direct path. The two
/// endpoint samples carry the antennas and are clamped to be non-negative, so
/// a mast never obstructs its own link; zero keeps the edge interpolation of a
/// block that starts at the mast well defined.
inline ClearanceProfile clearance_profile(const PathProfile& p, double radius = kEarthRadiusM) {
    if (!(radius > 0.0)) throw std::domain_error("clearance_profile: radius must be positive");
    const std::vector<double> line = direct_path_heights(p);
    const std::size_t n = p.size();
    const double d = p.distance_m();

    ClearanceProfile cp;
    cp.x_m.resize(n);
    cp.clearance_m.resize(n);
    cp.slant_factor = slant_factor(p);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (i + 1 == n) ? d : p.spacing_m * static_cast<double>(i);
        cp.x_m[i] = x;
        // x(d-x) written on sample indices so drop(i) == drop(n-1-i) bit for bit
        const double drop = std::isinf(radius)
            ? 0.0
            : p.spacing_m * p.spacing_m * static_cast<double>(i) * static_cast<double>(n - 1 - i) / (2.0 * radius);
        cp.clearance_m[i] = line[i] - (p.dsm_m[i] + drop);
    }
    cp.clearance_m.front() = std::max(cp.clearance_m.front(), 0.0);
    cp.clearance_m.back() = std::max(cp.clearance_m.back(), 0.0);
    return cp;
}

} // namespace pathfeat

#endif
