#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dishts/bench.hpp"
#include "dishts/checkpoint.hpp"
#include "dishts/csv.hpp"
#include "dishts/diagnostics.hpp"
#include "dishts/kvtext.hpp"
#include "dishts/pipeline.hpp"
#include "dishts/synthetic.hpp"
#include "dishts/training.hpp"

namespace dishts {

inline constexpr const char* kToolVersion = "0.1.0";

/// Stable exit codes: 0 success, 2 input error, 3 numeric failure,
/// 4 internal error.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Input: return 2;
        case ErrorKind::Numeric: return 3;
        case ErrorKind::Internal: return 4;
    }
    return 4;
}

/// Everything a run needs, resolved before any work starts. Precedence:
/// built-in defaults, then command-line flags, then config-file entries.
struct RunConfig {
    std::string data_csv;
    std::string synthetic_spec;
    bool drop_timestamp = false;
    std::size_t lookback = 48;
    std::size_t horizon = 16;
    std::string split = "7:1:2";
    std::string backbone = "linear";
    std::size_t hidden = 32;
    std::string mode = "dish";
    std::string init = "avg";
    double slope = 0.01;
    double alpha = 0.5;
    double lr = 1e-3;
    std::size_t batch = 64;
    std::size_t patience = 7;
    std::size_t max_epochs = 50;
    std::uint64_t seed = 0;
    double scale_mse = 1.0;
    double scale_mae = 1.0;
    std::string out_dir = "out";
    std::string checkpoint;     // eval input
    std::string sweep_axis;     // alpha | lookback | horizon | init
    std::string sweep_values;   // comma list
    double delta = 0.1;
    std::size_t anchors = 64;
    bool symmetric_kl = false;
    std::string suite;          // bench: file path or shifted|stationary
};

/// Apply one config entry; used both for config files (which override flags)
/// and for sweep axes.
inline void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value,
                             const std::string& where) {
    if (key == "data") cfg.data_csv = value;
    else if (key == "synthetic_spec") cfg.synthetic_spec = value;
    else if (key == "drop_timestamp") cfg.drop_timestamp = detail::to_bool(value, where);
    else if (key == "lookback") cfg.lookback = detail::to_u64(value, where);
    else if (key == "horizon") cfg.horizon = detail::to_u64(value, where);
    else if (key == "split") cfg.split = value;
    else if (key == "backbone") cfg.backbone = value;
    else if (key == "hidden") cfg.hidden = detail::to_u64(value, where);
    else if (key == "mode") cfg.mode = value;
    else if (key == "init") cfg.init = value;
    else if (key == "slope") cfg.slope = detail::to_double(value, where);
    else if (key == "alpha") cfg.alpha = detail::to_double(value, where);
    else if (key == "lr") cfg.lr = detail::to_double(value, where);
    else if (key == "batch") cfg.batch = detail::to_u64(value, where);
    else if (key == "patience") cfg.patience = detail::to_u64(value, where);
    else if (key == "max_epochs") cfg.max_epochs = detail::to_u64(value, where);
    else if (key == "seed") cfg.seed = detail::to_u64(value, where);
    else if (key == "scale_mse") cfg.scale_mse = detail::to_double(value, where);
    else if (key == "scale_mae") cfg.scale_mae = detail::to_double(value, where);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "checkpoint") cfg.checkpoint = value;
    else if (key == "sweep_axis") cfg.sweep_axis = value;
    else if (key == "sweep_values") cfg.sweep_values = value;
    else if (key == "delta") cfg.delta = detail::to_double(value, where);
    else if (key == "anchors") cfg.anchors = detail::to_u64(value, where);
    else if (key == "symmetric_kl") cfg.symmetric_kl = detail::to_bool(value, where);
    else if (key == "suite") cfg.suite = value;
    else throw Error::input(where + ": unknown config key '" + key + "'");
}

/// `key = value` per line, '#' comments. Entries override flag values.
inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error::input("config: cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        std::string key, value;
        if (!detail::parse_kv(line, key, value))
            throw Error::input(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        apply_config_key(cfg, key, value, path + ":" + std::to_string(line_no));
    }
}

/// The resolved config written next to every artifact; re-loadable as a
/// config file.
inline void write_resolved_config(const RunConfig& cfg, const std::string& path,
                                  const std::map<std::string, std::string>& extra_info = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error::input("config: cannot write '" + path + "'");
    out << "# dishts " << kToolVersion << " resolved run configuration\n";
    for (const auto& [key, value] : extra_info) out << "# " << key << " = " << value << '\n';
    out << "data = " << cfg.data_csv << '\n';
    out << "synthetic_spec = " << cfg.synthetic_spec << '\n';
    out << "drop_timestamp = " << (cfg.drop_timestamp ? "true" : "false") << '\n';
    out << "lookback = " << cfg.lookback << '\n';
    out << "horizon = " << cfg.horizon << '\n';
    out << "split = " << cfg.split << '\n';
    out << "backbone = " << cfg.backbone << '\n';
    out << "hidden = " << cfg.hidden << '\n';
    out << "mode = " << cfg.mode << '\n';
    out << "init = " << cfg.init << '\n';
    out << "slope = " << CsvWriter::num(cfg.slope) << '\n';
    out << "alpha = " << CsvWriter::num(cfg.alpha) << '\n';
    out << "lr = " << CsvWriter::num(cfg.lr) << '\n';
    out << "batch = " << cfg.batch << '\n';
    out << "patience = " << cfg.patience << '\n';
    out << "max_epochs = " << cfg.max_epochs << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "scale_mse = " << CsvWriter::num(cfg.scale_mse) << '\n';
    out << "scale_mae = " << CsvWriter::num(cfg.scale_mae) << '\n';
    out << "out = " << cfg.out_dir << '\n';
    if (!cfg.checkpoint.empty()) out << "checkpoint = " << cfg.checkpoint << '\n';
    if (!cfg.sweep_axis.empty()) out << "sweep_axis = " << cfg.sweep_axis << '\n';
    if (!cfg.sweep_values.empty()) out << "sweep_values = " << cfg.sweep_values << '\n';
    out << "delta = " << CsvWriter::num(cfg.delta) << '\n';
    out << "anchors = " << cfg.anchors << '\n';
    out << "symmetric_kl = " << (cfg.symmetric_kl ? "true" : "false") << '\n';
    if (!cfg.suite.empty()) out << "suite = " << cfg.suite << '\n';
}

namespace detail {

inline SeriesFrame load_frame(const RunConfig& cfg) {
    const bool have_csv = !cfg.data_csv.empty();
    const bool have_spec = !cfg.synthetic_spec.empty();
    if (have_csv == have_spec)
        throw Error::input("config: exactly one of --data and --synthetic-spec is required");
    if (have_csv) {
        CsvConfig csv_cfg;
        csv_cfg.drop_first_column = cfg.drop_timestamp;
        return load_csv(cfg.data_csv, csv_cfg);
    }
    return gen_synthetic(parse_synthetic_spec(cfg.synthetic_spec));
}

inline std::vector<WindowPair> windows_for(const char* partition, const SeriesFrame& frame,
                                           const RunConfig& cfg) {
    if (frame.length() < cfg.lookback + cfg.horizon)
        throw Error::input(std::string(partition) + " partition: length " +
                           std::to_string(frame.length()) + " cannot produce one window at lookback " +
                           std::to_string(cfg.lookback) + ", horizon " + std::to_string(cfg.horizon));
    return make_windows(frame, cfg.lookback, cfg.horizon);
}

inline ModelConfig model_config(const RunConfig& cfg, std::size_t n_series) {
    ModelConfig mc;
    mc.mode = parse_mode(cfg.mode);
    mc.backbone = parse_backbone(cfg.backbone);
    mc.lookback_len = cfg.lookback;
    mc.horizon_len = cfg.horizon;
    mc.n_series = n_series;
    mc.hidden = cfg.hidden;
    mc.init = parse_init(cfg.init);
    mc.slope = cfg.slope;
    mc.seed = cfg.seed;
    return mc;
}

inline std::map<std::string, std::string> checkpoint_meta(const RunConfig& cfg,
                                                          std::size_t n_series) {
    return {
        {"tool_version", kToolVersion},
        {"mode", cfg.mode},
        {"backbone", cfg.backbone},
        {"lookback", std::to_string(cfg.lookback)},
        {"horizon", std::to_string(cfg.horizon)},
        {"n_series", std::to_string(n_series)},
        {"hidden", std::to_string(cfg.hidden)},
        {"init", cfg.init},
        {"seed", std::to_string(cfg.seed)},
    };
}

inline void check_checkpoint_meta(const Checkpoint& ckpt, const std::string& key,
                                  const std::string& expected) {
    auto it = ckpt.meta.find(key);
    if (it != ckpt.meta.end() && it->second != expected)
        throw Error::input("checkpoint incompatible: " + key + " is " + it->second +
                           ", config says " + expected);
}

inline void validate_train_params(const RunConfig& cfg) {
    TrainConfig tc;
    tc.alpha = cfg.alpha;
    tc.lr = cfg.lr;
    tc.batch_size = cfg.batch;
    tc.patience = cfg.patience;
    tc.max_epochs = cfg.max_epochs;
    tc.validate();
    SplitSpec::parse(cfg.split);
    parse_mode(cfg.mode);
    parse_backbone(cfg.backbone);
    parse_init(cfg.init);
    if (cfg.lookback < 1 || cfg.horizon < 1)
        throw Error::input("config: lookback and horizon must be >= 1");
    if (parse_backbone(cfg.backbone) == BackboneKind::Identity && cfg.horizon > cfg.lookback)
        throw Error::input("config: identity backbone needs horizon <= lookback");
    if (cfg.out_dir.empty()) throw Error::input("config: output directory must not be empty");
}

}  // namespace detail

struct TrainOutcome {
    TrainResult result;
    std::string history_path;
    std::string checkpoint_path;
    std::string config_path;
    std::size_t n_series = 0;
};

/// train: fit a model, then write checkpoint, history CSV and resolved
/// config into the output directory.
inline TrainOutcome run_train(const RunConfig& cfg, std::ostream& log = std::cout) {
    detail::validate_train_params(cfg);
    SeriesFrame frame = detail::load_frame(cfg);
    SplitFrames parts = chrono_split(frame, SplitSpec::parse(cfg.split));
    auto train_ws = detail::windows_for("train", parts.train, cfg);
    auto val_ws = detail::windows_for("val", parts.val, cfg);

    DishModel model = make_model(detail::model_config(cfg, frame.n_series()));
    if (model.config.mode == NormMode::ZscoreBaseline) set_zscore_stats(model, parts.train);

    TrainConfig tc;
    tc.alpha = cfg.alpha;
    tc.lr = cfg.lr;
    tc.batch_size = cfg.batch;
    tc.patience = cfg.patience;
    tc.max_epochs = cfg.max_epochs;
    tc.seed = cfg.seed;
    TrainResult result = train(model, train_ws, val_ws, tc);

    std::filesystem::create_directories(cfg.out_dir);
    TrainOutcome outcome;
    outcome.result = result;
    outcome.n_series = frame.n_series();
    outcome.config_path = cfg.out_dir + "/resolved.cfg";
    outcome.history_path = cfg.out_dir + "/history.csv";
    outcome.checkpoint_path = cfg.out_dir + "/model.ckpt";

    write_resolved_config(cfg, outcome.config_path,
                          {{"n_series", std::to_string(frame.n_series())},
                           {"train_rows", std::to_string(parts.train.length())},
                           {"val_rows", std::to_string(parts.val.length())},
                           {"test_rows", std::to_string(parts.test.length())}});
    {
        CsvWriter history(outcome.history_path, {"epoch", "train_loss", "val_mse"});
        for (const auto& rec : result.history)
            history.row({std::to_string(rec.epoch), CsvWriter::num(rec.train_loss),
                         CsvWriter::num(rec.val_mse)});
    }
    save_checkpoint(outcome.checkpoint_path, model.store,
                    detail::checkpoint_meta(cfg, frame.n_series()));

    log << "train: " << result.history.size() << " epochs, best epoch " << result.best_epoch
        << ", best val mse " << result.best_val_mse << "\n";
    if (result.diverged) {
        log << "train: diverged (" << result.divergence_note
            << "); wrote last good checkpoint\n";
        throw Error::numeric("train diverged: " + result.divergence_note);
    }
    return outcome;
}

struct EvalOutcome {
    EvalResult result;
    Metrics metrics;
    std::string metrics_path;
    std::string config_path;
};

/// eval: load a checkpoint, score the test partition, write a per-series
/// metrics CSV and print a small table.
inline EvalOutcome run_eval(const RunConfig& cfg, std::ostream& log = std::cout) {
    if (cfg.checkpoint.empty()) throw Error::input("eval: --checkpoint is required");
    detail::validate_train_params(cfg);
    SeriesFrame frame = detail::load_frame(cfg);
    SplitFrames parts = chrono_split(frame, SplitSpec::parse(cfg.split));
    if (parts.test.length() == 0) throw Error::input("eval: test partition is empty");
    auto test_ws = detail::windows_for("test", parts.test, cfg);

    DishModel model = make_model(detail::model_config(cfg, frame.n_series()));
    Checkpoint ckpt = load_checkpoint(cfg.checkpoint);
    detail::check_checkpoint_meta(ckpt, "mode", cfg.mode);
    detail::check_checkpoint_meta(ckpt, "backbone", cfg.backbone);
    detail::check_checkpoint_meta(ckpt, "lookback", std::to_string(cfg.lookback));
    detail::check_checkpoint_meta(ckpt, "horizon", std::to_string(cfg.horizon));
    detail::check_checkpoint_meta(ckpt, "n_series", std::to_string(frame.n_series()));
    apply_checkpoint(model.store, ckpt);
    if (model.config.mode == NormMode::ZscoreBaseline) set_zscore_stats(model, parts.train);

    EvalOutcome outcome;
    outcome.result = evaluate(model, test_ws);
    outcome.metrics.mse = outcome.result.mse;
    outcome.metrics.mae = outcome.result.mae;
    outcome.metrics.scaled_mse = outcome.result.mse * cfg.scale_mse;
    outcome.metrics.scaled_mae = outcome.result.mae * cfg.scale_mae;

    std::filesystem::create_directories(cfg.out_dir);
    outcome.config_path = cfg.out_dir + "/resolved.cfg";
    outcome.metrics_path = cfg.out_dir + "/metrics.csv";
    write_resolved_config(cfg, outcome.config_path,
                          {{"n_series", std::to_string(frame.n_series())},
                           {"test_windows", std::to_string(outcome.result.n_windows)}});
    {
        CsvWriter csv(outcome.metrics_path,
                      {"scope", "series", "mse", "mae", "scaled_mse", "scaled_mae"});
        csv.row({"overall", "", CsvWriter::num(outcome.result.mse),
                 CsvWriter::num(outcome.result.mae), CsvWriter::num(outcome.metrics.scaled_mse),
                 CsvWriter::num(outcome.metrics.scaled_mae)});
        for (std::size_t i = 0; i < frame.n_series(); ++i) {
            csv.row({"series", frame.names()[i], CsvWriter::num(outcome.result.per_series_mse[i]),
                     CsvWriter::num(outcome.result.per_series_mae[i]),
                     CsvWriter::num(outcome.result.per_series_mse[i] * cfg.scale_mse),
                     CsvWriter::num(outcome.result.per_series_mae[i] * cfg.scale_mae)});
        }
    }

    char line[160];
    std::snprintf(line, sizeof(line), "%-12s %12s %12s %12s %12s\n", "scope", "mse", "mae",
                  "scaled_mse", "scaled_mae");
    log << line;
    std::snprintf(line, sizeof(line), "%-12s %12.6f %12.6f %12.6f %12.6f\n", "overall",
                  outcome.result.mse, outcome.result.mae, outcome.metrics.scaled_mse,
                  outcome.metrics.scaled_mae);
    log << line;
    for (std::size_t i = 0; i < frame.n_series(); ++i) {
        std::snprintf(line, sizeof(line), "%-12s %12.6f %12.6f\n", frame.names()[i].c_str(),
                      outcome.result.per_series_mse[i], outcome.result.per_series_mae[i]);
        log << line;
    }
    return outcome;
}

struct SweepRow {
    std::string value;
    double mse = 0.0;
    double mae = 0.0;
    std::string status = "ok";
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    std::string csv_path;
};

/// sweep: train one model per axis value with a shared seed and emit a
/// long-format CSV. A failed cell is recorded and the sweep continues.
inline SweepOutcome run_sweep(const RunConfig& cfg, std::ostream& log = std::cout) {
    if (cfg.sweep_axis != "alpha" && cfg.sweep_axis != "lookback" && cfg.sweep_axis != "horizon" &&
        cfg.sweep_axis != "init")
        throw Error::input("sweep: axis must be alpha|lookback|horizon|init, got '" +
                           cfg.sweep_axis + "'");
    if (cfg.sweep_values.empty()) throw Error::input("sweep: --sweep-values is required");
    detail::validate_train_params(cfg);

    SweepOutcome outcome;
    std::filesystem::create_directories(cfg.out_dir);
    write_resolved_config(cfg, cfg.out_dir + "/resolved.cfg");
    outcome.csv_path = cfg.out_dir + "/sweep.csv";
    CsvWriter csv(outcome.csv_path, {"axis", "value", "mse", "mae", "status"});

    for (const std::string& raw : detail::split(cfg.sweep_values, ',')) {
        const std::string value = detail::trim(raw);
        SweepRow row;
        row.value = value;
        try {
            RunConfig cell = cfg;
            apply_config_key(cell, cfg.sweep_axis, value, "sweep value '" + value + "'");
            SeriesFrame frame = detail::load_frame(cell);
            SplitFrames parts = chrono_split(frame, SplitSpec::parse(cell.split));
            auto train_ws = detail::windows_for("train", parts.train, cell);
            auto val_ws = detail::windows_for("val", parts.val, cell);
            auto test_ws = detail::windows_for("test", parts.test, cell);

            DishModel model = make_model(detail::model_config(cell, frame.n_series()));
            if (model.config.mode == NormMode::ZscoreBaseline)
                set_zscore_stats(model, parts.train);
            TrainConfig tc;
            tc.alpha = cell.alpha;
            tc.lr = cell.lr;
            tc.batch_size = cell.batch;
            tc.patience = cell.patience;
            tc.max_epochs = cell.max_epochs;
            tc.seed = cell.seed;  // shared across cells
            TrainResult tr = train(model, train_ws, val_ws, tc);
            if (tr.diverged) throw Error::numeric("diverged: " + tr.divergence_note);
            EvalResult ev = evaluate(model, test_ws);
            row.mse = ev.mse;
            row.mae = ev.mae;
        } catch (const Error& e) {
            row.status = std::string("error:") + e.category();
            log << "sweep: value " << value << " failed: " << e.what() << "\n";
        }
        csv.row({cfg.sweep_axis, row.value, CsvWriter::num(row.mse), CsvWriter::num(row.mae),
                 row.status});
        outcome.rows.push_back(std::move(row));
    }
    log << "sweep: wrote " << outcome.rows.size() << " rows to " << outcome.csv_path << "\n";
    return outcome;
}

struct DiagnoseOutcome {
    ShiftReport report;
    std::string csv_path;
    std::string summary_path;
};

/// diagnose: run the shift scan and write the per-pair distances plus a
/// plain-text summary.
inline DiagnoseOutcome run_diagnose(const RunConfig& cfg, std::ostream& log = std::cout) {
    if (cfg.lookback < 1 || cfg.horizon < 1)
        throw Error::input("config: lookback and horizon must be >= 1");
    if (cfg.delta < 0) throw Error::input("diagnose: delta must be >= 0");
    SeriesFrame frame = detail::load_frame(cfg);
    DiagnoseOutcome outcome;
    outcome.report =
        shift_scan(frame, cfg.lookback, cfg.horizon, cfg.delta, cfg.anchors, cfg.symmetric_kl);
    const ShiftReport& report = outcome.report;

    std::filesystem::create_directories(cfg.out_dir);
    write_resolved_config(cfg, cfg.out_dir + "/resolved.cfg",
                          {{"n_series", std::to_string(frame.n_series())}});
    outcome.csv_path = cfg.out_dir + "/shift.csv";
    {
        CsvWriter csv(outcome.csv_path,
                      {"kind", "series", "anchor_u", "anchor_v", "distance", "flag"});
        for (std::size_t p = 0; p < report.n_pairs(); ++p)
            for (std::size_t i = 0; i < report.n_series; ++i)
                csv.row({"intra", frame.names()[i], std::to_string(report.anchors[report.intra_u[p]]),
                         std::to_string(report.anchors[report.intra_v[p]]),
                         CsvWriter::num(report.intra_at(p, i)),
                         report.intra_flagged(p, i) ? "1" : "0"});
        for (std::size_t a = 0; a < report.anchors.size(); ++a)
            for (std::size_t i = 0; i < report.n_series; ++i)
                csv.row({"inter", frame.names()[i], std::to_string(report.anchors[a]),
                         std::to_string(report.anchors[a]), CsvWriter::num(report.inter_at(a, i)),
                         report.inter_flagged(a, i) ? "1" : "0"});
    }

    outcome.summary_path = cfg.out_dir + "/shift_summary.txt";
    {
        std::ofstream sum(outcome.summary_path, std::ios::binary);
        sum << "shift scan: " << report.anchors.size() << " anchors, lookback " << cfg.lookback
            << ", horizon " << cfg.horizon << ", delta " << cfg.delta
            << (report.symmetric ? ", symmetrized KL" : ", one-directional KL") << "\n";
        sum << "intra-space pairs: " << report.n_pairs() * report.n_series << ", flagged "
            << report.count_intra_flags() << "\n";
        sum << "inter-space pairs: " << report.anchors.size() * report.n_series << ", flagged "
            << report.count_inter_flags() << "\n";
        if (!frame.meta().segment_bounds.empty()) {
            sum << "known change points:";
            for (std::size_t b : frame.meta().segment_bounds) sum << ' ' << b;
            sum << "\n";
        }
        log << "diagnose: " << report.count_intra_flags() << " intra flags, "
            << report.count_inter_flags() << " inter flags at delta " << cfg.delta << "\n";
    }
    return outcome;
}

struct BenchOutcome {
    BenchSummary summary;
    std::string runs_path;
    std::string summary_path;
    std::string table_path;
};

/// bench: run a suite (file path, or the canned "shifted"/"stationary"
/// suites) and write per-run CSV, aggregate CSV, and a fixed-width table.
inline BenchOutcome run_bench(const RunConfig& cfg, std::ostream& log = std::cout) {
    BenchSuite suite;
    if (cfg.suite.empty() || cfg.suite == "shifted") suite = shifted_suite();
    else if (cfg.suite == "stationary") suite = stationary_suite();
    else suite = parse_suite(cfg.suite);

    BenchOutcome outcome;
    outcome.summary = run_suite(suite);

    std::filesystem::create_directories(cfg.out_dir);
    write_resolved_config(cfg, cfg.out_dir + "/resolved.cfg", {{"suite_name", suite.name}});
    outcome.runs_path = cfg.out_dir + "/bench_runs.csv";
    {
        CsvWriter csv(outcome.runs_path, {"cell", "mode", "seed", "mse", "mae", "status"});
        for (const auto& run : outcome.summary.runs)
            csv.row({run.cell, mode_name(run.mode), std::to_string(run.seed),
                     CsvWriter::num(run.mse), CsvWriter::num(run.mae),
                     run.ok ? "ok" : "failed: " + run.note});
    }
    outcome.summary_path = cfg.out_dir + "/bench_summary.csv";
    {
        CsvWriter csv(outcome.summary_path, {"cell", "mode", "n_seeds", "mean_mse", "std_mse",
                                             "mean_mae", "std_mae"});
        for (const auto& agg : outcome.summary.aggregates)
            csv.row({agg.cell, mode_name(agg.mode), std::to_string(agg.n_seeds),
                     CsvWriter::num(agg.mean_mse), CsvWriter::num(agg.std_mse),
                     CsvWriter::num(agg.mean_mae), CsvWriter::num(agg.std_mae)});
    }
    std::string table = format_summary_table(outcome.summary);
    outcome.table_path = cfg.out_dir + "/bench_table.txt";
    {
        std::ofstream out(outcome.table_path, std::ios::binary);
        out << table;
    }
    log << table;
    return outcome;
}

}  // namespace dishts
