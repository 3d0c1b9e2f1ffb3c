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

#ifndef PATHFEAT_FEATURE_TABLE_HPP
#define PATHFEAT_FEATURE_TABLE_HPP

#include "dataset.hpp"
#include "errors.hpp"
#include "features.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathfeat {

inline constexpr std::string_view kFeatureCsvHeader = "group,f1,f2,f3,f4,f5,f6,f7,f8,path_loss_db";

/// Extracted features with their labels; the on-disk form is the features CSV.
struct FeatureTable {
    std::vector<std::string> groups;
    std::vector<FeatureVector> features;
    std::vector<double> path_loss_db;

    std::size_t size() const noexcept { return features.size(); }

    void push_back(std::string group, const FeatureVector& fv, double label) {
        groups.push_back(std::move(group));
        features.push_back(fv);
        path_loss_db.push_back(label);
    }

    /// Distinct groups in order of first appearance.
    std::vector<std::string> unique_groups() const {
        std::vector<std::string> out;
        std::set<std::string> seen;
        for (const auto& g : groups)
            if (seen.insert(g).second) out.push_back(g);
        return out;
    }

    std::vector<std::size_t> rows_in(const std::set<std::string>& wanted) const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < size(); ++i)
            if (wanted.count(groups[i])) rows.push_back(i);
        return rows;
    }

    /// Leading `config` features of the selected rows, one row per sample.
    Eigen::MatrixXd matrix(int config, std::span<const std::size_t> rows) const {
        select_config(FeatureVector{}, config);  // validates config
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), config);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto a = features[rows[k]].as_array();
            for (int j = 0; j < config; ++j) m(static_cast<Eigen::Index>(k), j) = a[static_cast<std::size_t>(j)];
        }
        return m;
    }

    Eigen::MatrixXd matrix(int config) const {
        std::vector<std::size_t> all(size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return matrix(config, all);
    }

    Eigen::VectorXd targets(std::span<const std::size_t> rows) const {
        Eigen::VectorXd t(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t k = 0; k < rows.size(); ++k) t(static_cast<Eigen::Index>(k)) = path_loss_db[rows[k]];
        return t;
    }

    Eigen::VectorXd targets() const {
        return Eigen::Map<const Eigen::VectorXd>(path_loss_db.data(), static_cast<Eigen::Index>(size()));
    }

    FeatureTable subset(std::span<const std::size_t> rows) const {
        FeatureTable t;
        for (std::size_t i : rows) t.push_back(groups[i], features[i], path_loss_db[i]);
        return t;
    }
};

/// Features of every sample, computed with the given Earth radius.
inline FeatureTable extract_table(const std::vector<LinkSample>& samples, double radius = kEarthRadiusM) {
    FeatureTable t;
    for (const auto& s : samples) t.push_back(s.group, extract_features(s.profile, radius), s.measured_path_loss_db);
    return t;
}

inline void write_feature_csv_header(std::ostream& out) { out << kFeatureCsvHeader << '\n'; }

inline void write_feature_csv_row(std::ostream& out, const std::string& group, const FeatureVector& fv, double label) {
    if (group.find_first_of(",\n\r\"") != std::string::npos)
        throw validation_error("group '" + group + "' cannot be written to CSV");
    out << group;
    for (double v : fv.as_array()) out << ',' << detail::format_double(v);
    out << ',' << detail::format_double(label) << '\n';
}

inline void write_feature_csv(std::ostream& out, const FeatureTable& t) {
    write_feature_csv_header(out);
    for (std::size_t i = 0; i < t.size(); ++i) write_feature_csv_row(out, t.groups[i], t.features[i], t.path_loss_db[i]);
}

inline FeatureTable read_feature_csv(std::istream& in) {
    FeatureTable t;
    std::string raw;
    std::size_t line_no = 0;
    if (!std::getline(in, raw)) return t;
    ++line_no;
    if (detail::chomp(raw) != kFeatureCsvHeader) throw parse_error(line_no, "unexpected features CSV header");
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = detail::chomp(raw);
        if (line.empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != 10) throw parse_error(line_no, "expected 10 fields, got " + std::to_string(f.size()));
        if (f[0].empty()) throw parse_error(line_no, "empty group");
        std::array<double, kFeatureCount> a{};
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            const auto v = detail::parse_double(f[j + 1]);
            if (!v) throw parse_error(line_no, "malformed numeric field 'f" + std::to_string(j + 1) + "'");
            a[j] = *v;
        }
        const auto label = detail::parse_double(f[9]);
        if (!label) throw parse_error(line_no, "malformed numeric field 'path_loss_db'");
        t.push_back(std::string(f[0]), FeatureVector::from_array(a), *label);
    }
    return t;
}

} // namespace pathfeat

#endif
