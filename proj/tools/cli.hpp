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

#ifndef PATHFEAT_TOOLS_CLI_HPP
#define PATHFEAT_TOOLS_CLI_HPP

#include "CLI11.hpp"

#include "pathfeat/dataset.hpp"
#include "pathfeat/errors.hpp"
#include "pathfeat/experiments.hpp"
#include "pathfeat/feature_table.hpp"
#include "pathfeat/features.hpp"
#include "pathfeat/metrics.hpp"
#include "pathfeat/nn.hpp"
#include "pathfeat/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pathfeat::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

namespace fs = std::filesystem;

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    return out;
}

inline FeatureTable load_features(const std::string& path) {
    auto in = open_in(path);
    return read_feature_csv(in);
}

// Training flags shared by train / ablation / repeat-study.
struct TrainFlags {
    int max_epochs = 1000;
    int patience = 50;
    std::size_t batch_size = 8192;
    double learning_rate = 0.001;
    double train_fraction = 0.8;

    void add_to(CLI::App* sub) {
        sub->add_option("--max-epochs", max_epochs, "Epoch cap")->capture_default_str();
        sub->add_option("--patience", patience, "Early-stopping patience in epochs")->capture_default_str();
        sub->add_option("--batch-size", batch_size, "Minibatch size")->capture_default_str();
        sub->add_option("--learning-rate", learning_rate, "Adam learning rate")->capture_default_str();
        sub->add_option("--train-fraction", train_fraction, "Train share of the train/validation split")
            ->capture_default_str();
    }

    nn::TrainConfig config() const {
        nn::TrainConfig tc;
        tc.max_epochs = max_epochs;
        tc.patience_epochs = patience;
        tc.batch_size = batch_size;
        tc.learning_rate = learning_rate;
        tc.train_fraction = train_fraction;
        tc.validate();
        return tc;
    }
};

/// All subcommands, their flags and bound values.
class Cli {
public:
    Cli() : app_("Obstruction features and dense-network path loss modelling", "pathfeat") {
        app_.require_subcommand(1);
        app_.fallthrough();
        app_.set_help_all_flag("--help-all", "Help for every subcommand");
        app_.add_flag("-v,--verbose", verbose_, "Progress messages on stderr");

        auto* ex = app_.add_subcommand("extract", "Path profiles (JSONL or csv-long) -> features CSV");
        ex->add_option("--input", ex_.input, "Profile file")->required();
        ex->add_option("--output", ex_.output, "Features CSV ('-' for stdout)")->capture_default_str();
        ex->add_option("--format", ex_.format, "Input format")->check(CLI::IsMember({"jsonl", "csv-long"}))
            ->capture_default_str();
        ex->add_option("--earth-radius-m", ex_.radius_m, "Earth radius for curvature correction")
            ->check(CLI::PositiveNumber)->capture_default_str();
        ex->add_option("--noise-margin-db", ex_.margin_db, "Required headroom above the noise floor")
            ->check(CLI::NonNegativeNumber)->capture_default_str();

        auto* tr = app_.add_subcommand("train", "Features CSV -> model file + training history CSV");
        tr->add_option("--input", tr_.input, "Features CSV")->required();
        tr->add_option("--output", tr_.output, "Model file (JSON)")->required();
        tr->add_option("--history", tr_.history, "History CSV (default: <output>.history.csv)");
        tr->add_option("--features", tr_.features, "Feature configuration")->check(CLI::IsMember({4, 6, 8}))
            ->capture_default_str();
        tr->add_option("--seed", tr_.seed, "Seed for the split and the initialisation")->capture_default_str();
        tr_.train.add_to(tr);

        auto* ev = app_.add_subcommand("eval", "Model + features CSV -> metrics JSON, hexbin and binned-error CSVs");
        ev->add_option("--model", ev_.model, "Model file")->required();
        ev->add_option("--input", ev_.input, "Features CSV")->required();
        ev->add_option("--output", ev_.output, "Output directory")->required();
        ev->add_option("--bin-width-m", ev_.bin_width_m, "Distance bin width")->check(CLI::PositiveNumber)
            ->capture_default_str();
        ev->add_option("--hex-cell-size", ev_.hex_cell_size, "Hexagon radius in dB (measured vs predicted)")
            ->check(CLI::PositiveNumber)->capture_default_str();

        auto* ab = app_.add_subcommand("ablation", "Repeated-run holdout study over feature configurations");
        ab->add_option("--input", ab_.input, "Features CSV (or features_csv in --config)");
        ab->add_option("--output", ab_.output, "Output directory")->capture_default_str();
        ab->add_option("--features", ab_.features, "Feature configurations")->check(CLI::IsMember({4, 6, 8}))
            ->capture_default_str();
        ab->add_option("--runs", ab_.runs, "Runs per scenario and configuration")->check(CLI::PositiveNumber)
            ->capture_default_str();
        ab->add_option("--seed", ab_.seed, "Base seed")->capture_default_str();
        ab->add_option("--parallelism", ab_.parallelism, "Concurrent training runs")->check(CLI::PositiveNumber)
            ->capture_default_str();
        ab->add_option("--external-test", ab_.external, "Features CSV scored by the no-holdout scenario");
        ab_.train.add_to(ab);

        auto* rs = app_.add_subcommand("repeat-study", "Many-run study of one scenario with best-k selection");
        rs->add_option("--input", rs_.input, "Features CSV (or features_csv in --config)");
        rs->add_option("--output", rs_.output, "Output directory")->capture_default_str();
        rs->add_option("--scenario", rs_.scenario, "Held-out group, or no-holdout")->required();
        rs->add_option("--features", rs_.features, "Feature configuration")->check(CLI::IsMember({4, 6, 8}))
            ->capture_default_str();
        rs->add_option("--runs", rs_.runs, "Number of runs")->check(CLI::PositiveNumber)->capture_default_str();
        rs->add_option("--best-k", rs_.best_k, "Runs kept by validation RMSE")->check(CLI::PositiveNumber)
            ->capture_default_str();
        rs->add_option("--seed", rs_.seed, "Base seed")->capture_default_str();
        rs->add_option("--parallelism", rs_.parallelism, "Concurrent training runs")->check(CLI::PositiveNumber)
            ->capture_default_str();
        rs->add_option("--external-test", rs_.external, "Features CSV scored by the no-holdout scenario");
        rs_.train.add_to(rs);

        auto* sy = app_.add_subcommand("synth", "Generate synthetic link samples");
        sy->add_option("--n", sy_.n, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
        sy->add_option("--seed", sy_.seed, "Generator seed")->capture_default_str();
        sy->add_option("--noise-sd-db", sy_.noise_sd_db, "Gaussian label noise SD")->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        sy->add_option("--output", sy_.output, "Sample file ('-' for stdout)")->capture_default_str();
        sy->add_option("--format", sy_.format, "Output format")->check(CLI::IsMember({"jsonl", "csv-long"}))
            ->capture_default_str();

        auto* sc = app_.add_subcommand("scenarios", "List the holdout scenarios of a dataset");
        sc->add_option("--input", sc_.input, "Features CSV or profile JSONL")->required();
        sc->add_option("--format", sc_.format, "Input format")
            ->check(CLI::IsMember({"features-csv", "jsonl", "csv-long"}))->capture_default_str();
        sc->add_option("--output", sc_.output, "Listing ('-' for stdout)")->capture_default_str();

        for (auto* sub : app_.get_subcommands({}))
            sub->add_option("--config", config_path_[sub], "JSON file whose values override flags");
    }

    CLI::App& app() { return app_; }

    int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
        try {
            app_.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app_.exit(e, out, err);
        } catch (const CLI::CallForAllHelp& e) {
            return app_.exit(e, out, err);
        } catch (const CLI::ParseError& e) {
            app_.exit(e, out, err);
            return kUsage;
        }
        CLI::App* sub = app_.get_subcommands().front();
        try {
            apply_config_file(sub);
            const std::string name = sub->get_name();
            if (name == "extract") return extract(out, err);
            if (name == "train") return train(err);
            if (name == "eval") return evaluate(err);
            if (name == "ablation") return ablation(err);
            if (name == "repeat-study") return repeat(err);
            if (name == "synth") return synth(out);
            if (name == "scenarios") return scenarios(out);
            return kUsage;
        } catch (const usage_error& e) {
            err << "pathfeat " << sub->get_name() << ": usage error: " << e.what() << '\n';
            return kUsage;
        } catch (const CLI::ParseError& e) {
            err << "pathfeat " << sub->get_name() << ": usage error: " << e.what() << '\n';
            return kUsage;
        } catch (const io_error& e) {
            err << "pathfeat " << sub->get_name() << ": I/O error: " << e.what() << '\n';
            return kFailure;
        } catch (const std::exception& e) {
            err << "pathfeat " << sub->get_name() << ": error: " << e.what() << '\n';
            return kFailure;
        }
    }

private:
    struct ExtractArgs {
        std::string input, output = "-", format = "jsonl";
        double radius_m = kEarthRadiusM, margin_db = 6.0;
    };
    struct TrainArgs {
        std::string input, output, history;
        int features = 8;
        std::uint64_t seed = 0;
        TrainFlags train;
    };
    struct EvalArgs {
        std::string model, input, output;
        double bin_width_m = 3000.0, hex_cell_size = 1.0;
    };
    struct AblationArgs {
        std::string input, output = "ablation_out", external;
        std::vector<int> features{4, 6, 8};
        std::size_t runs = 20, parallelism = 1;
        std::uint64_t seed = 0;
        TrainFlags train;
    };
    struct RepeatArgs {
        std::string input, output = "repeat_out", scenario, external;
        int features = 8;
        std::size_t runs = 200, best_k = 20, parallelism = 1;
        std::uint64_t seed = 0;
        TrainFlags train;
    };
    struct SynthArgs {
        std::size_t n = 1000;
        std::uint64_t seed = 0;
        double noise_sd_db = 0.0;
        std::string output = "-", format = "jsonl";
    };
    struct ScenarioArgs {
        std::string input, output = "-", format = "features-csv";
    };

    // Experiment subcommands take an experiment config; everything else maps
    // JSON keys onto flag names ("max-epochs": 10 == --max-epochs 10).
    void apply_config_file(CLI::App* sub) {
        const std::string& path = config_path_[sub];
        if (path.empty()) return;
        auto in = open_in(path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw usage_error("config '" + path + "' is not valid JSON: " + e.what());
        }
        if (!j.is_object()) throw usage_error("config must be a JSON object");
        if (sub->get_name() == "ablation" || sub->get_name() == "repeat-study") {
            experiment_json_ = j;
            return;
        }
        for (const auto& [key, value] : j.items()) {
            if (key == "config") throw usage_error("config files cannot nest --config");
            CLI::Option* opt = nullptr;
            try {
                opt = sub->get_option("--" + key);
            } catch (const CLI::OptionNotFound&) {
                throw usage_error("unknown config key '" + key + "'");
            }
            std::vector<std::string> values;
            if (value.is_array()) {
                for (const auto& v : value) values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            } else {
                values.push_back(value.is_string() ? value.get<std::string>() : value.dump());
            }
            opt->clear();
            for (const auto& v : values) opt->add_result(v);
            opt->run_callback();
        }
    }

    void log(std::ostream& err, const std::string& msg) const {
        if (verbose_) err << msg << '\n';
    }

    int extract(std::ostream& out, std::ostream& err) {
        auto in = open_in(ex_.input);
        std::ofstream file;
        std::ostream* dst = &out;
        if (ex_.output != "-") {
            file = open_out(ex_.output);
            dst = &file;
        }
        write_feature_csv_header(*dst);
        std::size_t kept = 0, dropped = 0;
        auto emit = [&](const LinkSample& s) {
            if (filter_noise({s}, ex_.margin_db).empty()) {
                ++dropped;
                return;
            }
            write_feature_csv_row(*dst, s.group, extract_features(s.profile, ex_.radius_m), s.measured_path_loss_db);
            ++kept;
        };
        if (ex_.format == "jsonl") {
            JsonlSampleReader reader(in);
            while (auto s = reader.next()) emit(*s);
        } else {
            for (const auto& s : parse_samples(in, SampleFormat::csv_long)) emit(s);
        }
        if (!*dst) throw io_error("write failed");
        log(err, "extract: " + std::to_string(kept) + " rows written, " + std::to_string(dropped) +
                     " below the noise margin");
        return kOk;
    }

    int train(std::ostream& err) {
        const FeatureTable t = load_features(tr_.input);
        if (t.size() < 4) throw validation_error("need at least 4 rows to train");
        const nn::TrainConfig base = tr_.train.config();
        const SplitIndices split = split_indices(t.size(), base.train_fraction, tr_.seed);
        nn::TrainConfig tc = base;
        tc.seed = derive_seed(tr_.seed, 0, "init");
        nn::MlpConfig mc;
        mc.input_dim = tr_.features;
        const nn::TrainResult r = nn::train(t.matrix(tr_.features, split.train), t.targets(split.train),
                                            t.matrix(tr_.features, split.validation), t.targets(split.validation),
                                            mc, tc);
        {
            auto out = open_out(tr_.output);
            nn::save_model(out, r.model);
        }
        const std::string history = tr_.history.empty() ? tr_.output + ".history.csv" : tr_.history;
        auto h = open_out(history);
        h << "epoch,train_mse,val_mse\n";
        for (std::size_t e = 0; e < r.history.train_mse.size(); ++e)
            h << e + 1 << ',' << detail::format_double(r.history.train_mse[e]) << ','
              << detail::format_double(r.history.val_mse[e]) << '\n';
        log(err, "train: " + std::to_string(r.history.epochs_run) + " epochs, best " +
                     std::to_string(r.history.best_epoch) + ", " + std::to_string(r.model.param_count()) +
                     " parameters");
        return kOk;
    }

    int evaluate(std::ostream& err) {
        auto min = open_in(ev_.model);
        const nn::MlpModel model = nn::load_model(min);
        const FeatureTable t = load_features(ev_.input);
        if (t.size() == 0) throw validation_error("no rows to evaluate");
        const int cfg = model.config().input_dim;
        const Eigen::VectorXd pred_v = nn::predict(model, t.matrix(cfg));
        const std::vector<double> pred(pred_v.data(), pred_v.data() + pred_v.size());
        const std::vector<double>& y = t.path_loss_db;
        std::vector<double> dist, freq, abs_err, base;
        std::vector<std::array<double, 2>> points;
        for (std::size_t i = 0; i < t.size(); ++i) {
            dist.push_back(t.features[i].f2_distance_m);
            freq.push_back(t.features[i].f1_frequency_mhz);
            abs_err.push_back(std::abs(pred[i] - y[i]));
            base.push_back(fspl(t.features[i].f1_frequency_mhz, t.features[i].f2_distance_m));
            points.push_back({y[i], pred[i]});
        }
        auto safe = [](auto&& fn) -> nlohmann::json {
            try {
                return fn();
            } catch (const std::domain_error&) {
                return nullptr;
            }
        };
        nlohmann::json m = {
            {"n", t.size()},
            {"features", cfg},
            {"param_count", model.param_count()},
            {"rmse_db", rmse(pred, y)},
            {"mae_db", mae(pred, y)},
            {"r2", safe([&] { return r_squared(pred, y); })},
            {"pearson_r", safe([&] { return pearson(pred, y); })},
            {"fspl_rmse_db", rmse(base, y)},
            {"abs_error_vs_distance_r", safe([&] { return pearson(dist, abs_err); })},
            {"abs_error_vs_frequency_r", safe([&] { return pearson(freq, abs_err); })},
        };
        const fs::path dir(ev_.output);
        {
            auto o = open_out(dir / "metrics.json");
            o << m.dump(2) << '\n';
        }
        {
            auto o = open_out(dir / "hexbin.csv");
            write_hexbin_csv(o, hexbin(points, ev_.hex_cell_size));
        }
        {
            auto o = open_out(dir / "error_by_distance.csv");
            write_distance_bins_csv(o, bin_abs_error_by_distance(dist, pred, y, ev_.bin_width_m));
        }
        {
            auto o = open_out(dir / "error_by_frequency.csv");
            write_frequency_bins_csv(o, abs_error_by_frequency(freq, pred, y));
        }
        log(err, "eval: rmse " + std::to_string(m["rmse_db"].get<double>()) + " dB over " +
                     std::to_string(t.size()) + " rows");
        return kOk;
    }

    experiments::ExperimentConfig experiment_base(const std::string& input, const std::string& output,
                                                  const std::vector<int>& configs, std::size_t runs,
                                                  std::uint64_t seed, std::size_t parallelism,
                                                  const std::string& external, const TrainFlags& train) const {
        experiments::ExperimentConfig c;
        c.features_csv = input;
        c.output_dir = output;
        c.feature_configs = configs;
        c.n_runs = runs;
        c.base_seed = seed;
        c.parallelism = parallelism;
        if (!external.empty()) {
            c.external_test_csv = external;
            c.include_no_holdout = true;
        }
        c.train = train.config();
        if (!experiment_json_.is_null()) c = experiments::experiment_config_from_json(experiment_json_, c);
        if (c.features_csv.empty()) throw usage_error("no features CSV given (--input or features_csv)");
        return c;
    }

    struct Loaded {
        FeatureTable data;
        std::optional<FeatureTable> external;
        std::vector<Scenario> scenarios;
    };

    static Loaded load_experiment(const experiments::ExperimentConfig& c) {
        Loaded l;
        l.data = load_features(c.features_csv);
        if (c.external_test_csv) l.external = load_features(*c.external_test_csv);
        l.scenarios = c.scenarios;
        if (l.scenarios.empty()) {
            l.scenarios = build_scenarios(l.data.unique_groups());
            if (!c.include_no_holdout) l.scenarios.pop_back();
        }
        return l;
    }

    static void write_outputs(const fs::path& dir, const std::vector<experiments::RunRecord>& records) {
        auto runs = open_out(dir / "runs.csv");
        experiments::write_runs_csv(runs, records);
        auto timing = open_out(dir / "timing.json");
        timing << experiments::timing_json(records).dump(2) << '\n';
    }

    int ablation(std::ostream& err) {
        const auto c = experiment_base(ab_.input, ab_.output, ab_.features, ab_.runs, ab_.seed, ab_.parallelism,
                                       ab_.external, ab_.train);
        const Loaded l = load_experiment(c);
        experiments::RunOptions opt;
        opt.train = c.train;
        opt.parallelism = c.parallelism;
        opt.external_test = l.external ? &*l.external : nullptr;
        log(err, "ablation: " + std::to_string(l.scenarios.size()) + " scenarios x " +
                     std::to_string(c.feature_configs.size()) + " configs x " + std::to_string(c.n_runs) + " runs");
        const auto table =
            experiments::ablation_study(l.data, l.scenarios, c.feature_configs, c.n_runs, c.base_seed, opt);
        const fs::path dir(c.output_dir);
        write_outputs(dir, table.records);
        auto stats = open_out(dir / "stats.csv");
        experiments::write_stats_header(stats);
        for (std::size_t s = 0; s < table.scenarios.size(); ++s)
            for (std::size_t k = 0; k < table.configs.size(); ++k)
                experiments::write_stats_rows(stats, table.scenarios[s], table.configs[k], "all", table.grid[s][k]);
        auto ab = open_out(dir / "ablation.csv");
        experiments::write_ablation_csv(ab, table, c.reference_rmse_db);
        return kOk;
    }

    int repeat(std::ostream& err) {
        const auto c = experiment_base(rs_.input, rs_.output, {rs_.features}, rs_.runs, rs_.seed, rs_.parallelism,
                                       rs_.external, rs_.train);
        if (c.feature_configs.size() != 1) throw usage_error("repeat-study takes exactly one feature configuration");
        Loaded l = load_experiment(c);
        std::vector<Scenario> all = build_scenarios(l.data.unique_groups());
        all.insert(all.end(), c.scenarios.begin(), c.scenarios.end());
        const auto it = std::find_if(all.begin(), all.end(), [&](const Scenario& s) { return s.name == rs_.scenario; });
        if (it == all.end()) throw usage_error("unknown scenario '" + rs_.scenario + "'");
        experiments::RunOptions opt;
        opt.train = c.train;
        opt.parallelism = c.parallelism;
        opt.external_test = l.external ? &*l.external : nullptr;
        log(err, "repeat-study: " + std::to_string(c.n_runs) + " runs of " + it->name);
        const auto r = experiments::repeat_study(l.data, *it, c.feature_configs.front(), c.n_runs, c.base_seed,
                                                 rs_.best_k, opt);
        const fs::path dir(c.output_dir);
        write_outputs(dir, r.records);
        auto stats = open_out(dir / "stats.csv");
        experiments::write_stats_header(stats);
        experiments::write_stats_rows(stats, it->name, c.feature_configs.front(), "all", r.all);
        experiments::write_stats_rows(stats, it->name, c.feature_configs.front(), "best_" + std::to_string(r.k),
                                      r.best_k);
        auto table = open_out(dir / "repeat.csv");
        experiments::write_repeat_csv(table, r);
        return kOk;
    }

    int synth(std::ostream& out) {
        std::ofstream file;
        std::ostream* dst = &out;
        if (sy_.output != "-") {
            file = open_out(sy_.output);
            dst = &file;
        }
        SyntheticOptions opt;
        opt.noise_sd_db = sy_.noise_sd_db;
        if (sy_.format == "jsonl") {
            SyntheticGenerator gen(sy_.seed, opt);
            for (std::size_t i = 0; i < sy_.n; ++i) write_jsonl(*dst, gen.next());
        } else {
            write_csv_long(*dst, gen_synthetic(sy_.n, sy_.seed, sy_.noise_sd_db, opt));
        }
        if (!*dst) throw io_error("write failed");
        return kOk;
    }

    int scenarios(std::ostream& out) {
        std::vector<std::string> groups;
        auto in = open_in(sc_.input);
        if (sc_.format == "features-csv") {
            groups = read_feature_csv(in).unique_groups();
        } else {
            FeatureTable t;
            for (auto& s : parse_samples(in, parse_sample_format(sc_.format)))
                t.push_back(s.group, FeatureVector{}, s.measured_path_loss_db);
            groups = t.unique_groups();
        }
        std::ofstream file;
        std::ostream* dst = &out;
        if (sc_.output != "-") {
            file = open_out(sc_.output);
            dst = &file;
        }
        auto join = [](const std::set<std::string>& s) {
            std::string r;
            for (const auto& g : s) r += (r.empty() ? "" : ";") + g;
            return r;
        };
        *dst << "scenario,train_groups,test_groups\n";
        for (const auto& s : build_scenarios(groups))
            *dst << s.name << ',' << join(s.train_groups) << ',' << (s.external_test ? "external" : join(s.test_groups))
                 << '\n';
        return kOk;
    }

    CLI::App app_;
    bool verbose_ = false;
    std::map<CLI::App*, std::string> config_path_;
    nlohmann::json experiment_json_;
    ExtractArgs ex_;
    TrainArgs tr_;
    EvalArgs ev_;
    AblationArgs ab_;
    RepeatArgs rs_;
    SynthArgs sy_;
    ScenarioArgs sc_;
};

inline int run(int argc, const char* const* argv) {
    Cli cli;
    return cli.run(argc, argv);
}

} // namespace pathfeat::cli

#endif
