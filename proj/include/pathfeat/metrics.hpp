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

#ifndef PATHFEAT_METRICS_HPP
#define PATHFEAT_METRICS_HPP

#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace pathfeat {

namespace detail {

inline void check_pair(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) throw shape_error(std::string(what) + ": length mismatch");
    if (a.empty()) throw usage_error(std::string(what) + ": empty input");
}

inline double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace detail

inline double mse(std::span<const double> pred, std::span<const double> target) {
    detail::check_pair(pred, target, "mse");
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double r = pred[i] - target[i];
        s += r * r;
    }
    return s / static_cast<double>(pred.size());
}

inline double rmse(std::span<const double> pred, std::span<const double> target) {
    return std::sqrt(mse(pred, target));
}

inline double mae(std::span<const double> pred, std::span<const double> target) {
    detail::check_pair(pred, target, "mae");
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - target[i]);
    return s / static_cast<double>(pred.size());
}

/// Coefficient of determination, 1 - SS_res / SS_tot.
inline double r_squared(std::span<const double> pred, std::span<const double> target) {
    detail::check_pair(pred, target, "r_squared");
    const double mu = detail::mean_of(target);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        ss_res += (target[i] - pred[i]) * (target[i] - pred[i]);
        ss_tot += (target[i] - mu) * (target[i] - mu);
    }
    if (!(ss_tot > 0.0)) throw std::domain_error("r_squared: target has zero variance");
    return 1.0 - ss_res / ss_tot;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    detail::check_pair(x, y, "pearson");
    const double mx = detail::mean_of(x);
    const double my = detail::mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw std::domain_error("pearson: constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Free-space path loss, 32.45 + 20 log10(d_km) + 20 log10(f_MHz).
inline double fspl(double frequency_mhz, double distance_m) {
    if (!(frequency_mhz > 0.0) || !(distance_m > 0.0)) throw std::domain_error("fspl: arguments must be positive");
    return 32.45 + 20.0 * std::log10(distance_m / 1000.0) + 20.0 * std::log10(frequency_mhz);
}

// Absolute-error statistics for one bin. `sd_db` is the population SD of the
// absolute error.
struct ErrorBin {
    double low = 0.0;   // distance bins: [low, high); frequency groups: low == high == key
    double high = 0.0;
    std::size_t count = 0;
    double mae_db = 0.0;
    double sd_db = 0.0;
};

struct BinnedError {
    std::vector<ErrorBin> bins;
};

namespace detail {

inline BinnedError summarize_bins(const std::map<std::int64_t, std::vector<double>>& groups,
                                  const std::function<std::pair<double, double>(std::int64_t)>& edges) {
    BinnedError out;
    for (const auto& [key, errs] : groups) {
        ErrorBin b;
        std::tie(b.low, b.high) = edges(key);
        b.count = errs.size();
        b.mae_db = mean_of(errs);
        double ss = 0.0;
        for (double e : errs) ss += (e - b.mae_db) * (e - b.mae_db);
        b.sd_db = std::sqrt(ss / static_cast<double>(errs.size()));
        out.bins.push_back(b);
    }
    return out;
}

} // namespace detail

/// |pred - target| grouped into [k w, (k+1) w) distance bins starting at 0.
inline BinnedError bin_abs_error_by_distance(std::span<const double> distance_m, std::span<const double> pred,
                                             std::span<const double> target, double bin_width_m = 3000.0) {
    if (!(bin_width_m > 0.0)) throw usage_error("bin width must be positive");
    if (distance_m.size() != pred.size() || pred.size() != target.size())
        throw shape_error("bin_abs_error_by_distance: length mismatch");
    std::map<std::int64_t, std::vector<double>> groups;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const auto k = static_cast<std::int64_t>(std::floor(distance_m[i] / bin_width_m));
        groups[k].push_back(std::abs(pred[i] - target[i]));
    }
    return detail::summarize_bins(groups, [&](std::int64_t k) {
        return std::pair{static_cast<double>(k) * bin_width_m, static_cast<double>(k + 1) * bin_width_m};
    });
}

/// |pred - target| grouped by exact frequency value, ascending.
inline BinnedError abs_error_by_frequency(std::span<const double> frequency_mhz, std::span<const double> pred,
                                          std::span<const double> target) {
    if (frequency_mhz.size() != pred.size() || pred.size() != target.size())
        throw shape_error("abs_error_by_frequency: length mismatch");
    std::map<double, std::vector<double>> groups;
    for (std::size_t i = 0; i < pred.size(); ++i) groups[frequency_mhz[i]].push_back(std::abs(pred[i] - target[i]));
    BinnedError out;
    for (const auto& [f, errs] : groups) {
        std::map<std::int64_t, std::vector<double>> one{{0, errs}};
        ErrorBin b = detail::summarize_bins(one, [&](std::int64_t) { return std::pair{f, f}; }).bins.front();
        out.bins.push_back(b);
    }
    return out;
}

inline void write_distance_bins_csv(std::ostream& out, const BinnedError& be) {
    out.precision(17);
    out << "bin_low,bin_high,count,mae_db,sd_db\n";
    for (const auto& b : be.bins) out << b.low << ',' << b.high << ',' << b.count << ',' << b.mae_db << ',' << b.sd_db << '\n';
}

inline void write_frequency_bins_csv(std::ostream& out, const BinnedError& be) {
    out.precision(17);
    out << "frequency_mhz,count,mae_db,sd_db\n";
    for (const auto& b : be.bins) out << b.low << ',' << b.count << ',' << b.mae_db << ',' << b.sd_db << '\n';
}

struct HexCell {
    std::int64_t q = 0;
    std::int64_t r = 0;
    double center_x = 0.0;
    double center_y = 0.0;
    std::size_t count = 0;
};

struct HexBinGrid {
    double cell_size = 1.0;
    std::vector<HexCell> cells;  // sorted by (q, r)
};

/// Centre of axial cell (q, r) in a flat-top tiling; `size` is the
/// centre-to-corner radius.
inline std::pair<double, double> hex_center(std::int64_t q, std::int64_t r, double size) {
    const double qd = static_cast<double>(q);
    const double rd = static_cast<double>(r);
    return {size * 1.5 * qd, size * std::sqrt(3.0) * (rd + 0.5 * qd)};
}

/// Axial cell whose centre is nearest to (x, y). Equidistant centres resolve
/// to the lexicographically smallest (q, r).
inline std::pair<std::int64_t, std::int64_t> hex_cell_of(double x, double y, double size) {
    const double qf = (2.0 / 3.0) * x / size;
    const double rf = (-x / 3.0 + std::sqrt(3.0) / 3.0 * y) / size;
    const auto q0 = static_cast<std::int64_t>(std::floor(qf));
    const auto r0 = static_cast<std::int64_t>(std::floor(rf));
    std::pair<std::int64_t, std::int64_t> best{0, 0};
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::int64_t q = q0 - 1; q <= q0 + 2; ++q) {
        for (std::int64_t r = r0 - 1; r <= r0 + 2; ++r) {
            const auto [cx, cy] = hex_center(q, r, size);
            const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            if (d2 < best_d2 || (d2 == best_d2 && std::pair{q, r} < best)) {
                best_d2 = d2;
                best = {q, r};
            }
        }
    }
    return best;
}

inline HexBinGrid hexbin(std::span<const std::array<double, 2>> points, double cell_size) {
    if (!(cell_size > 0.0)) throw usage_error("hexbin cell size must be positive");
    std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> counts;
    for (const auto& p : points) ++counts[hex_cell_of(p[0], p[1], cell_size)];
    HexBinGrid grid{cell_size, {}};
    grid.cells.reserve(counts.size());
    for (const auto& [qr, n] : counts) {
        const auto [cx, cy] = hex_center(qr.first, qr.second, cell_size);
        grid.cells.push_back({qr.first, qr.second, cx, cy, n});
    }
    return grid;
}

inline void write_hexbin_csv(std::ostream& out, const HexBinGrid& grid) {
    out.precision(17);
    out << "q,r,center_x,center_y,count\n";
    for (const auto& c : grid.cells)
        out << c.q << ',' << c.r << ',' << c.center_x << ',' << c.center_y << ',' << c.count << '\n';
}

} // namespace pathfeat

#endif
