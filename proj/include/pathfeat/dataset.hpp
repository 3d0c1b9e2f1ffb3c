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

#ifndef PATHFEAT_DATASET_HPP
#define PATHFEAT_DATASET_HPP

#include "errors.hpp"
#include "profile.hpp"
#include "seed.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pathfeat {

/// One measured link: its profile, the measured path loss label and the
/// drive-test (region) it belongs to.
///
/// `noise_floor_db` is the path loss at which the received level would reach
/// the measurement noise floor, so `noise_floor_db - measured_path_loss_db` is
/// the headroom above the floor. Absent means the row was filtered upstream.
struct LinkSample {
    PathProfile profile;
    double measured_path_loss_db = 0.0;
    std::string group;
    std::optional<double> noise_floor_db;
};

inline void validate(const LinkSample& s) {
    validate(s.profile);
    if (!std::isfinite(s.measured_path_loss_db)) throw validation_error("path_loss_db must be finite");
    if (s.group.empty()) throw validation_error("group must be non-empty");
    if (s.noise_floor_db && !std::isfinite(*s.noise_floor_db)) throw validation_error("noise_floor_db must be finite");
}

enum class SampleFormat { csv_long, jsonl };

inline SampleFormat parse_sample_format(std::string_view s) {
    if (s == "jsonl") return SampleFormat::jsonl;
    if (s == "csv-long") return SampleFormat::csv_long;
    throw usage_error("unknown sample format '" + std::string(s) + "' (expected jsonl or csv-long)");
}

namespace detail {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::vector<std::string_view> split_fields(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::string_view chomp(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

inline double json_number(const nlohmann::json& obj, const char* key, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw parse_error(line, std::string("missing key '") + key + "'");
    if (!it->is_number()) throw parse_error(line, std::string("key '") + key + "' is not a number");
    return it->get<double>();
}

inline std::vector<double> json_numbers(const nlohmann::json& obj, const char* key, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw parse_error(line, std::string("missing key '") + key + "'");
    if (!it->is_array()) throw parse_error(line, std::string("key '") + key + "' is not an array");
    std::vector<double> out;
    out.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_number()) throw parse_error(line, std::string("non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

inline void check_row(const LinkSample& s, std::size_t line) {
    try {
        validate(s);
    } catch (const validation_error& e) {
        throw validation_error("line " + std::to_string(line) + ": " + e.what());
    }
}

} // namespace detail

/// Parses one JSONL object. `line` is used for diagnostics only.
inline LinkSample sample_from_json(const nlohmann::json& obj, std::size_t line) {
    if (!obj.is_object()) throw parse_error(line, "expected a JSON object");
    LinkSample s;
    const auto g = obj.find("group");
    if (g == obj.end() || !g->is_string()) throw parse_error(line, "missing string key 'group'");
    s.group = g->get<std::string>();
    s.profile.frequency_mhz = detail::json_number(obj, "frequency_mhz", line);
    s.profile.spacing_m = detail::json_number(obj, "spacing_m", line);
    s.profile.tx_height_agl_m = detail::json_number(obj, "tx_height_agl_m", line);
    s.profile.rx_height_agl_m = detail::json_number(obj, "rx_height_agl_m", line);
    s.profile.dtm_m = detail::json_numbers(obj, "dtm_m", line);
    s.profile.dsm_m = detail::json_numbers(obj, "dsm_m", line);
    s.measured_path_loss_db = detail::json_number(obj, "path_loss_db", line);
    if (const auto nf = obj.find("noise_floor_db"); nf != obj.end() && !nf->is_null())
        s.noise_floor_db = detail::json_number(obj, "noise_floor_db", line);
    detail::check_row(s, line);
    return s;
}

inline nlohmann::json sample_to_json(const LinkSample& s) {
    nlohmann::json j = {
        {"group", s.group},
        {"frequency_mhz", s.profile.frequency_mhz},
        {"spacing_m", s.profile.spacing_m},
        {"tx_height_agl_m", s.profile.tx_height_agl_m},
        {"rx_height_agl_m", s.profile.rx_height_agl_m},
        {"dtm_m", s.profile.dtm_m},
        {"dsm_m", s.profile.dsm_m},
        {"path_loss_db", s.measured_path_loss_db},
    };
    if (s.noise_floor_db) j["noise_floor_db"] = *s.noise_floor_db;
    return j;
}

/// Line-at-a-time JSONL reader; never holds more than one row in memory.
class JsonlSampleReader {
public:
    explicit JsonlSampleReader(std::istream& in) : in_(in) {}

    std::optional<LinkSample> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            const std::string_view body = detail::chomp(line);
            if (body.find_first_not_of(" \t") == std::string_view::npos) continue;
            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(body);
            } catch (const nlohmann::json::exception& e) {
                throw parse_error(line_no_, std::string("malformed JSON: ") + e.what());
            }
            return sample_from_json(obj, line_no_);
        }
        return std::nullopt;
    }

    std::size_t line() const noexcept { return line_no_; }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

inline void write_jsonl(std::ostream& out, const LinkSample& s) { out << sample_to_json(s).dump() << '\n'; }

inline void write_jsonl(std::ostream& out, const std::vector<LinkSample>& samples) {
    for (const auto& s : samples) write_jsonl(out, s);
}

// csv-long: one line per profile point; consecutive lines sharing sample_id
// form one link and must repeat identical link-level fields.
inline constexpr std::string_view kCsvLongHeader =
    "sample_id,group,frequency_mhz,spacing_m,tx_height_agl_m,rx_height_agl_m,path_loss_db,noise_floor_db,dtm_m,dsm_m";

inline void write_csv_long(std::ostream& out, const std::vector<LinkSample>& samples) {
    using detail::format_double;
    out << kCsvLongHeader << '\n';
    for (std::size_t id = 0; id < samples.size(); ++id) {
        const LinkSample& s = samples[id];
        if (s.group.find_first_of(",\n\r\"") != std::string::npos)
            throw validation_error("group '" + s.group + "' cannot be written to CSV");
        std::string head = std::to_string(id) + ',' + s.group + ',' + format_double(s.profile.frequency_mhz) + ',' +
                           format_double(s.profile.spacing_m) + ',' + format_double(s.profile.tx_height_agl_m) + ',' +
                           format_double(s.profile.rx_height_agl_m) + ',' + format_double(s.measured_path_loss_db) +
                           ',' + (s.noise_floor_db ? format_double(*s.noise_floor_db) : std::string()) + ',';
        for (std::size_t i = 0; i < s.profile.size(); ++i)
            out << head << format_double(s.profile.dtm_m[i]) << ',' << format_double(s.profile.dsm_m[i]) << '\n';
    }
}

inline std::vector<LinkSample> parse_csv_long(std::istream& in) {
    std::vector<LinkSample> out;
    std::string raw;
    std::size_t line_no = 0;
    if (!std::getline(in, raw)) return out;
    ++line_no;
    if (detail::chomp(raw) != kCsvLongHeader) throw parse_error(line_no, "unexpected csv-long header");

    std::string current_id;
    std::size_t first_line = 0;
    auto finish = [&]() {
        if (!current_id.empty()) detail::check_row(out.back(), first_line);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = detail::chomp(raw);
        if (line.empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != 10) throw parse_error(line_no, "expected 10 fields, got " + std::to_string(f.size()));
        auto num = [&](std::size_t k, const char* name) {
            const auto v = detail::parse_double(f[k]);
            if (!v) throw parse_error(line_no, std::string("malformed numeric field '") + name + "'");
            return *v;
        };
        const double freq = num(2, "frequency_mhz");
        const double spacing = num(3, "spacing_m");
        const double tx = num(4, "tx_height_agl_m");
        const double rx = num(5, "rx_height_agl_m");
        const double pl = num(6, "path_loss_db");
        std::optional<double> floor;
        if (!f[7].empty()) floor = num(7, "noise_floor_db");
        const double dtm = num(8, "dtm_m");
        const double dsm = num(9, "dsm_m");
        if (f[0].empty()) throw parse_error(line_no, "empty sample_id");

        if (f[0] != current_id) {
            finish();
            current_id = std::string(f[0]);
            first_line = line_no;
            LinkSample s;
            s.group = std::string(f[1]);
            s.profile.frequency_mhz = freq;
            s.profile.spacing_m = spacing;
            s.profile.tx_height_agl_m = tx;
            s.profile.rx_height_agl_m = rx;
            s.measured_path_loss_db = pl;
            s.noise_floor_db = floor;
            out.push_back(std::move(s));
        } else {
            const LinkSample& s = out.back();
            const bool same = s.group == f[1] && s.profile.frequency_mhz == freq && s.profile.spacing_m == spacing &&
                              s.profile.tx_height_agl_m == tx && s.profile.rx_height_agl_m == rx &&
                              s.measured_path_loss_db == pl && s.noise_floor_db == floor;
            if (!same)
                throw validation_error("line " + std::to_string(line_no) + ": link fields differ within sample " +
                                       current_id);
        }
        out.back().profile.dtm_m.push_back(dtm);
        out.back().profile.dsm_m.push_back(dsm);
    }
    finish();
    return out;
}

/// Reads every row of a sample stream, preserving order.
inline std::vector<LinkSample> parse_samples(std::istream& in, SampleFormat format) {
    if (format == SampleFormat::csv_long) return parse_csv_long(in);
    std::vector<LinkSample> out;
    JsonlSampleReader reader(in);
    while (auto s = reader.next()) out.push_back(std::move(*s));
    return out;
}

inline void serialize_samples(std::ostream& out, const std::vector<LinkSample>& samples, SampleFormat format) {
    if (format == SampleFormat::csv_long)
        write_csv_long(out, samples);
    else
        write_jsonl(out, samples);
}

/// Drops samples whose headroom above the noise floor does not exceed `margin_db`.
inline std::vector<LinkSample> filter_noise(const std::vector<LinkSample>& samples, double margin_db = 6.0) {
    if (!(margin_db >= 0.0)) throw usage_error("margin_db must be >= 0");
    std::vector<LinkSample> kept;
    for (const auto& s : samples) {
        if (!s.noise_floor_db || *s.noise_floor_db - s.measured_path_loss_db > margin_db) kept.push_back(s);
    }
    return kept;
}

/// Uniform sampling without replacement of at most `per_stratum` rows from
/// every (group, frequency) stratum. Output keeps input order. Each stratum
/// draws from its own seed so the choice in one stratum does not depend on
/// what else is in the file.
inline std::vector<LinkSample> subsample(const std::vector<LinkSample>& samples, std::size_t per_stratum,
                                         std::uint64_t seed) {
    if (per_stratum < 1) throw usage_error("per_stratum must be >= 1");
    std::map<std::pair<std::string, double>, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < samples.size(); ++i)
        strata[{samples[i].group, samples[i].profile.frequency_mhz}].push_back(i);

    std::vector<std::size_t> chosen;
    for (auto& [key, idx] : strata) {
        if (idx.size() > per_stratum) {
            const std::uint64_t key_hash =
                fnv1a(key.first) ^ mix64(static_cast<std::uint64_t>(std::llround(key.second * 1000.0)));
            std::mt19937_64 rng(derive_seed(seed, key_hash, "subsample"));
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(per_stratum);
        }
        chosen.insert(chosen.end(), idx.begin(), idx.end());
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<LinkSample> out;
    out.reserve(chosen.size());
    for (std::size_t i : chosen) out.push_back(samples[i]);
    return out;
}

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

/// Random train/validation partition of 0..n-1; train size round(n * fraction),
/// kept within [1, n-1] so neither side is empty. Indices come back sorted.
inline SplitIndices split_indices(std::size_t n, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw usage_error("train_fraction must be in (0, 1)");
    if (n < 2) throw usage_error("split needs at least 2 samples");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    SplitIndices s;
    s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.validation.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.validation.begin(), s.validation.end());
    return s;
}

template <class T>
std::pair<std::vector<T>, std::vector<T>> split(const std::vector<T>& samples, double train_fraction,
                                                std::uint64_t seed) {
    const SplitIndices s = split_indices(samples.size(), train_fraction, seed);
    std::pair<std::vector<T>, std::vector<T>> out;
    for (std::size_t i : s.train) out.first.push_back(samples[i]);
    for (std::size_t i : s.validation) out.second.push_back(samples[i]);
    return out;
}

// Who is reading which rows; lets tests prove that statistics and model
// selection never look at validation or test data they should not.
enum class DataRole { train, validation, test };
using AccessAudit = std::function<void(DataRole role, std::string_view purpose, std::size_t rows)>;

/// Per-feature standardisation (population SD) fitted on training rows.
struct Normalizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;

    Eigen::Index dim() const noexcept { return mean.size(); }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const {
        if (x.cols() != dim())
            throw shape_error("normalizer expects " + std::to_string(dim()) + " columns, got " +
                              std::to_string(x.cols()));
        return (x.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array();
    }

    static Normalizer identity(Eigen::Index dim) {
        return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
    }

    bool operator==(const Normalizer& o) const { return mean == o.mean && sd == o.sd; }
};

inline Normalizer fit_normalizer(const Eigen::MatrixXd& train_features) {
    if (train_features.rows() < 2) throw usage_error("normalizer needs at least 2 rows");
    const auto n = static_cast<double>(train_features.rows());
    Normalizer norm;
    norm.mean = train_features.colwise().mean().transpose();
    norm.sd.resize(train_features.cols());
    for (Eigen::Index j = 0; j < train_features.cols(); ++j) {
        const double var = (train_features.col(j).array() - norm.mean(j)).square().sum() / n;
        const double sd = std::sqrt(var);
        if (!(sd > 1e-12 * std::max(1.0, std::abs(norm.mean(j)))))
            throw validation_error("feature f" + std::to_string(j + 1) + " is constant over the training rows");
        norm.sd(j) = sd;
    }
    return norm;
}

/// A train/test arrangement of groups. `external_test` marks the scenario
/// that trains on every group and is scored on a separately supplied set.
struct Scenario {
    std::string name;
    std::set<std::string> train_groups;
    std::set<std::string> test_groups;
    bool external_test = false;
};

inline constexpr std::string_view kNoHoldout = "no-holdout";

/// One leave-one-group-out scenario per group, in input order, then "no-holdout".
inline std::vector<Scenario> build_scenarios(const std::vector<std::string>& groups) {
    if (groups.size() < 2) throw usage_error("need at least 2 groups to build holdout scenarios");
    const std::set<std::string> all(groups.begin(), groups.end());
    if (all.size() != groups.size()) throw usage_error("duplicate group labels");
    if (all.count(std::string(kNoHoldout))) throw usage_error("group label 'no-holdout' is reserved");
    std::vector<Scenario> out;
    for (const auto& g : groups) {
        Scenario s{g, all, {g}, false};
        s.train_groups.erase(g);
        out.push_back(std::move(s));
    }
    out.push_back({std::string(kNoHoldout), all, {}, true});
    return out;
}

} // namespace pathfeat

#endif
