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

#ifndef PATHFEAT_EXPERIMENTS_HPP
#define PATHFEAT_EXPERIMENTS_HPP

#include "dataset.hpp"
#include "errors.hpp"
#include "feature_table.hpp"
#include "metrics.hpp"
#include "nn.hpp"
#include "seed.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace pathfeat::experiments {

struct RunRecord {
    std::string scenario;
    int feature_config = 8;
    std::size_t run_index = 0;
    std::uint64_t split_seed = 0;
    std::uint64_t init_seed = 0;
    double val_rmse_db = 0.0;
    double test_rmse_db = 0.0;
    int best_epoch = 0;
    int epochs_run = 0;
    double wall_time_s = 0.0;  // metadata only; never written to runs.csv
};

struct RmseSummary {
    double mean = 0.0;
    double sd = 0.0;  // sample SD (n - 1); 0 for a single run
    double min = 0.0;
    double max = 0.0;
    double median = 0.0;
};

struct RunStats {
    RmseSummary validation;
    RmseSummary test;
    std::size_t n_runs = 0;
};

inline RmseSummary summarize(std::vector<double> v) {
    if (v.empty()) throw usage_error("summarize: no values");
    std::sort(v.begin(), v.end());
    RmseSummary s;
    const auto n = v.size();
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    s.min = v.front();
    s.max = v.back();
    s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    return s;
}

/// Aggregates are computed from sorted values, so record order is irrelevant.
inline RunStats run_stats(const std::vector<RunRecord>& records) {
    std::vector<double> val, test;
    for (const auto& r : records) {
        val.push_back(r.val_rmse_db);
        test.push_back(r.test_rmse_db);
    }
    return {summarize(std::move(val)), summarize(std::move(test)), records.size()};
}

/// The k records with the lowest validation RMSE; ties go to the lower split seed.
inline std::vector<RunRecord> select_best_k(const std::vector<RunRecord>& records, std::size_t k) {
    if (k < 1 || k > records.size())
        throw usage_error("k must be in [1, " + std::to_string(records.size()) + "], got " + std::to_string(k));
    std::vector<RunRecord> sorted = records;
    std::stable_sort(sorted.begin(), sorted.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.val_rmse_db, a.split_seed) < std::tie(b.val_rmse_db, b.split_seed);
    });
    sorted.resize(k);
    return sorted;
}

struct RunOptions {
    nn::TrainConfig train{};
    nn::MlpConfig model{};  // input_dim is overridden by the feature config
    std::size_t parallelism = 1;
    const FeatureTable* external_test = nullptr;  // test set of the no-holdout scenario
    AccessAudit audit{};                          // must be thread-safe when parallelism > 1
};

/// Runs fn(0..n-1) on up to `parallelism` threads; rethrows the first failure.
inline void parallel_for(std::size_t n, std::size_t parallelism, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct ScenarioResult {
    std::vector<RunRecord> records;  // ordered by run index
    RunStats stats;
};

/// Split seed for run i; shared across feature configs so 4/6/8 comparisons are paired.
inline std::uint64_t split_seed_for(std::uint64_t base_seed, std::size_t run) { return base_seed + run; }
inline std::uint64_t init_seed_for(std::uint64_t base_seed, std::size_t run) {
    return derive_seed(base_seed, run, "init");
}

/// Repeated independent training runs of one scenario and feature config.
///
/// Run i draws its train/validation split from the scenario's training groups
/// with seed base_seed + i and initialises the network from an independent
/// derived seed. Test rows are read once per run, for the final score.
inline ScenarioResult run_scenario(const FeatureTable& data, const Scenario& scenario, int feature_config,
                                   std::size_t n_runs, std::uint64_t base_seed, const RunOptions& opt = {}) {
    if (n_runs < 1) throw usage_error("n_runs must be >= 1");
    select_config(FeatureVector{}, feature_config);
    if (scenario.train_groups.empty()) throw config_error("scenario '" + scenario.name + "' has no training groups");
    const auto present = data.unique_groups();
    const std::set<std::string> have(present.begin(), present.end());
    for (const auto* groups : {&scenario.train_groups, &scenario.test_groups})
        for (const auto& g : *groups)
            if (!have.count(g)) throw config_error("scenario '" + scenario.name + "': group '" + g + "' not in data");

    const FeatureTable* test_table = &data;
    std::vector<std::size_t> test_rows;
    if (scenario.external_test) {
        if (!opt.external_test || opt.external_test->size() == 0)
            throw config_error("scenario '" + scenario.name + "' needs an external test set");
        test_table = opt.external_test;
        test_rows.resize(test_table->size());
        for (std::size_t i = 0; i < test_rows.size(); ++i) test_rows[i] = i;
    } else {
        test_rows = data.rows_in(scenario.test_groups);
    }
    if (test_rows.empty()) throw config_error("scenario '" + scenario.name + "' has no test rows");
    const std::vector<std::size_t> pool = data.rows_in(scenario.train_groups);
    if (pool.size() < 4) throw config_error("scenario '" + scenario.name + "' has too few training rows");

    nn::MlpConfig mc = opt.model;
    mc.input_dim = feature_config;

    ScenarioResult result;
    result.records.resize(n_runs);
    parallel_for(n_runs, opt.parallelism, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        RunRecord rec;
        rec.scenario = scenario.name;
        rec.feature_config = feature_config;
        rec.run_index = i;
        rec.split_seed = split_seed_for(base_seed, i);
        rec.init_seed = init_seed_for(base_seed, i);

        const SplitIndices split = split_indices(pool.size(), opt.train.train_fraction, rec.split_seed);
        std::vector<std::size_t> tr, va;
        for (std::size_t k : split.train) tr.push_back(pool[k]);
        for (std::size_t k : split.validation) va.push_back(pool[k]);

        nn::TrainConfig tc = opt.train;
        tc.seed = rec.init_seed;
        const nn::TrainResult fit = nn::train(data.matrix(feature_config, tr), data.targets(tr),
                                              data.matrix(feature_config, va), data.targets(va), mc, tc, opt.audit);
        rec.val_rmse_db = std::sqrt(fit.history.best_val_mse());
        rec.best_epoch = fit.history.best_epoch;
        rec.epochs_run = fit.history.epochs_run;

        if (opt.audit) opt.audit(DataRole::test, "final_evaluation", test_rows.size());
        const Eigen::VectorXd pred = nn::predict(fit.model, test_table->matrix(feature_config, test_rows));
        rec.test_rmse_db = std::sqrt(nn::mse(pred, test_table->targets(test_rows)));
        rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.records[i] = std::move(rec);
    });
    result.stats = run_stats(result.records);
    return result;
}

/// Scenario x feature-config grid of run statistics plus a cross-scenario mean row.
struct AblationTable {
    std::vector<std::string> scenarios;
    std::vector<int> configs;
    std::vector<std::vector<RunStats>> grid;  // [scenario][config]
    std::vector<RunRecord> records;

    /// Mean over scenarios of the per-scenario mean and SD of test RMSE.
    std::pair<double, double> mean_row(std::size_t config_index) const {
        double m = 0.0, s = 0.0;
        for (const auto& row : grid) {
            m += row.at(config_index).test.mean;
            s += row.at(config_index).test.sd;
        }
        const auto n = static_cast<double>(grid.size());
        return {m / n, s / n};
    }
};

inline AblationTable ablation_study(const FeatureTable& data, const std::vector<Scenario>& scenarios,
                                    const std::vector<int>& configs, std::size_t n_runs, std::uint64_t base_seed,
                                    const RunOptions& opt = {}) {
    if (scenarios.empty()) throw usage_error("ablation needs at least one scenario");
    if (configs.empty()) throw usage_error("ablation needs at least one feature config");
    for (int c : configs) select_config(FeatureVector{}, c);
    AblationTable table;
    table.configs = configs;
    for (const auto& sc : scenarios) {
        table.scenarios.push_back(sc.name);
        auto& row = table.grid.emplace_back();
        for (int c : configs) {
            ScenarioResult r = run_scenario(data, sc, c, n_runs, base_seed, opt);
            row.push_back(r.stats);
            table.records.insert(table.records.end(), r.records.begin(), r.records.end());
        }
    }
    return table;
}

struct RepeatStudy {
    std::vector<RunRecord> records;
    RunStats all;
    RunStats best_k;
    std::size_t k = 0;
};

/// Many-run sensitivity study with best-k-by-validation selection.
inline RepeatStudy repeat_study(const FeatureTable& data, const Scenario& scenario, int feature_config,
                                std::size_t n_runs, std::uint64_t base_seed, std::size_t k = 20,
                                const RunOptions& opt = {}) {
    if (k < 1 || k > n_runs) throw usage_error("repeat_study: need 1 <= k <= n_runs");
    ScenarioResult r = run_scenario(data, scenario, feature_config, n_runs, base_seed, opt);
    RepeatStudy out;
    out.k = k;
    out.all = r.stats;
    out.best_k = run_stats(select_best_k(r.records, k));
    out.records = std::move(r.records);
    return out;
}

inline void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& records) {
    using detail::format_double;
    out << "scenario,features,run,split_seed,init_seed,val_rmse_db,test_rmse_db,best_epoch,epochs_run\n";
    for (const auto& r : records)
        out << r.scenario << ',' << r.feature_config << ',' << r.run_index << ',' << r.split_seed << ','
            << r.init_seed << ',' << format_double(r.val_rmse_db) << ',' << format_double(r.test_rmse_db) << ','
            << r.best_epoch << ',' << r.epochs_run << '\n';
}

inline void write_stats_header(std::ostream& out) {
    out << "scenario,features,subset,n_runs,split,min,max,median,mean,sd\n";
}

inline void write_stats_rows(std::ostream& out, const std::string& scenario, int config, const std::string& subset,
                             const RunStats& s) {
    using detail::format_double;
    for (const auto& [name, sum] : {std::pair{"validation", s.validation}, std::pair{"test", s.test}})
        out << scenario << ',' << config << ',' << subset << ',' << s.n_runs << ',' << name << ','
            << format_double(sum.min) << ',' << format_double(sum.max) << ',' << format_double(sum.median) << ','
            << format_double(sum.mean) << ',' << format_double(sum.sd) << '\n';
}

/// Rows = scenarios then "Mean"; columns = (mean, sd) of test RMSE per config.
/// `reference_rmse_db` supplies an optional external comparison column.
inline void write_ablation_csv(std::ostream& out, const AblationTable& t,
                               const std::map<std::string, double>& reference_rmse_db = {}) {
    using detail::format_double;
    out << "scenario,reference_rmse_db";
    for (int c : t.configs) out << ",f" << c << "_mean,f" << c << "_sd";
    out << '\n';
    auto ref = [&](const std::string& key) {
        const auto it = reference_rmse_db.find(key);
        return it == reference_rmse_db.end() ? std::string() : format_double(it->second);
    };
    for (std::size_t s = 0; s < t.scenarios.size(); ++s) {
        out << t.scenarios[s] << ',' << ref(t.scenarios[s]);
        for (const auto& st : t.grid[s]) out << ',' << format_double(st.test.mean) << ',' << format_double(st.test.sd);
        out << '\n';
    }
    out << "Mean," << ref("Mean");
    for (std::size_t c = 0; c < t.configs.size(); ++c) {
        const auto [m, sd] = t.mean_row(c);
        out << ',' << format_double(m) << ',' << format_double(sd);
    }
    out << '\n';
}

/// Min / Max / Median / Mean(all) / Mean(best k) rows for validation and test.
inline void write_repeat_csv(std::ostream& out, const RepeatStudy& r) {
    using detail::format_double;
    out << "statistic,validation_rmse_db,test_rmse_db\n";
    auto row = [&](const std::string& name, double v, double t) {
        out << name << ',' << format_double(v) << ',' << format_double(t) << '\n';
    };
    row("min", r.all.validation.min, r.all.test.min);
    row("max", r.all.validation.max, r.all.test.max);
    row("median", r.all.validation.median, r.all.test.median);
    row("mean_all_" + std::to_string(r.all.n_runs), r.all.validation.mean, r.all.test.mean);
    row("sd_all_" + std::to_string(r.all.n_runs), r.all.validation.sd, r.all.test.sd);
    row("mean_best_" + std::to_string(r.k), r.best_k.validation.mean, r.best_k.test.mean);
    row("sd_best_" + std::to_string(r.k), r.best_k.validation.sd, r.best_k.test.sd);
}

inline nlohmann::json timing_json(const std::vector<RunRecord>& records) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : records)
        runs.push_back({{"scenario", r.scenario}, {"features", r.feature_config}, {"run", r.run_index},
                        {"wall_time_s", r.wall_time_s}});
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    return {{"generated_unix_s", std::chrono::duration_cast<std::chrono::seconds>(now).count()}, {"runs", runs}};
}

/// Experiment description loaded from JSON. Unknown keys are rejected.
struct ExperimentConfig {
    std::string features_csv;
    std::optional<std::string> external_test_csv;
    std::vector<Scenario> scenarios;  // empty: leave-one-group-out over the data
    bool include_no_holdout = false;
    std::vector<int> feature_configs{4, 6, 8};
    std::size_t n_runs = 20;
    std::uint64_t base_seed = 0;
    std::size_t parallelism = 1;
    std::string output_dir = ".";
    nn::TrainConfig train{};
    std::map<std::string, double> reference_rmse_db;
};

/// Keys present in `j` override the matching fields of `base`.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j, ExperimentConfig base = {}) {
    static const std::set<std::string> known{"features_csv", "external_test_csv", "scenarios",   "include_no_holdout",
                                             "feature_configs", "n_runs",         "base_seed",   "parallelism",
                                             "output_dir",   "train",             "reference_rmse_db"};
    static const std::set<std::string> known_train{"batch_size", "learning_rate", "patience_epochs", "max_epochs",
                                                   "train_fraction"};
    if (!j.is_object()) throw usage_error("experiment config must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw usage_error("unknown experiment config key '" + k + "'");
    ExperimentConfig c = std::move(base);
    try {
        if (j.contains("features_csv")) c.features_csv = j["features_csv"].get<std::string>();
        if (j.contains("external_test_csv")) c.external_test_csv = j["external_test_csv"].get<std::string>();
        if (j.contains("include_no_holdout")) c.include_no_holdout = j["include_no_holdout"].get<bool>();
        if (j.contains("feature_configs")) c.feature_configs = j["feature_configs"].get<std::vector<int>>();
        if (j.contains("n_runs")) c.n_runs = j["n_runs"].get<std::size_t>();
        if (j.contains("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
        if (j.contains("parallelism")) c.parallelism = j["parallelism"].get<std::size_t>();
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("reference_rmse_db"))
            c.reference_rmse_db = j["reference_rmse_db"].get<std::map<std::string, double>>();
        if (j.contains("scenarios")) {
            c.scenarios.clear();
            for (const auto& js : j["scenarios"]) {
                Scenario s;
                s.name = js.at("name").get<std::string>();
                s.train_groups = js.at("train_groups").get<std::set<std::string>>();
                if (js.contains("test_groups")) s.test_groups = js["test_groups"].get<std::set<std::string>>();
                if (js.contains("external_test")) s.external_test = js["external_test"].get<bool>();
                for (const auto& g : s.test_groups)
                    if (s.train_groups.count(g))
                        throw usage_error("scenario '" + s.name + "': group '" + g + "' is both train and test");
                c.scenarios.push_back(std::move(s));
            }
        }
        if (j.contains("train")) {
            const auto& t = j["train"];
            for (const auto& [k, v] : t.items())
                if (!known_train.count(k)) throw usage_error("unknown train config key '" + k + "'");
            if (t.contains("batch_size")) c.train.batch_size = t["batch_size"].get<std::size_t>();
            if (t.contains("learning_rate")) c.train.learning_rate = t["learning_rate"].get<double>();
            if (t.contains("patience_epochs")) c.train.patience_epochs = t["patience_epochs"].get<int>();
            if (t.contains("max_epochs")) c.train.max_epochs = t["max_epochs"].get<int>();
            if (t.contains("train_fraction")) c.train.train_fraction = t["train_fraction"].get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw usage_error(std::string("bad experiment config: ") + e.what());
    }
    c.train.validate();
    for (int fc : c.feature_configs) select_config(FeatureVector{}, fc);
    if (c.n_runs < 1) throw usage_error("n_runs must be >= 1");
    return c;
}

} // namespace pathfeat::experiments

#endif
