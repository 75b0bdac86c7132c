#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dishts/error.hpp"
#include "dishts/kvtext.hpp"
#include "dishts/pipeline.hpp"
#include "dishts/synthetic.hpp"
#include "dishts/training.hpp"

namespace dishts {

/// One benchmark cell: a synthetic process plus window sizes, repeated over
/// seeds. Each seed is an independent replicate: it drives both the data
/// draw and training, and every mode within a (cell, seed) pair consumes the
/// bit-identical frame and window order.
struct BenchCell {
    std::string name;
    SyntheticSpec spec;
    std::size_t lookback = 48;
    std::size_t horizon = 16;
    std::vector<std::uint64_t> seeds;
};

struct BenchSuite {
    std::string name = "suite";
    std::vector<NormMode> modes{NormMode::Dish, NormMode::NoneBaseline, NormMode::RevinBaseline};
    BackboneKind backbone = BackboneKind::Linear;
    InitStrategy init = InitStrategy::Avg;
    std::size_t hidden = 32;
    SplitSpec split{7, 1, 2};
    TrainConfig base;  // seed field ignored; per-run seeds come from the cell
    std::vector<BenchCell> cells;
};

struct BenchRun {
    std::string cell;
    NormMode mode = NormMode::Dish;
    std::uint64_t seed = 0;
    double mse = 0.0;
    double mae = 0.0;
    bool ok = false;
    std::string note;
};

struct BenchAggregate {
    std::string cell;
    NormMode mode = NormMode::Dish;
    std::size_t n_seeds = 0;
    double mean_mse = 0.0, std_mse = 0.0;
    double mean_mae = 0.0, std_mae = 0.0;
};

struct BenchImprovement {
    std::string cell;
    NormMode baseline = NormMode::NoneBaseline;
    double value = 0.0;  // 1 - mse(dish)/mse(baseline)
};

struct BenchSummary {
    std::vector<BenchRun> runs;
    std::vector<BenchAggregate> aggregates;
    std::vector<BenchImprovement> improvements;
    std::vector<std::string> warnings;

    const BenchAggregate* find(const std::string& cell, NormMode mode) const {
        for (const auto& a : aggregates)
            if (a.cell == cell && a.mode == mode) return &a;
        return nullptr;
    }
    const BenchImprovement* find_improvement(const std::string& cell, NormMode baseline) const {
        for (const auto& imp : improvements)
            if (imp.cell == cell && imp.baseline == baseline) return &imp;
        return nullptr;
    }
};

/// Train and score one (cell, seed, mode) run on the test partition.
inline BenchRun bench_run(const BenchSuite& suite, const BenchCell& cell, std::uint64_t seed,
                          NormMode mode) {
    BenchRun run;
    run.cell = cell.name;
    run.mode = mode;
    run.seed = seed;
    try {
        SyntheticSpec spec = cell.spec;
        spec.seed = seed;
        SeriesFrame frame = gen_synthetic(spec);
        SplitFrames parts = chrono_split(frame, suite.split);
        auto train_ws = make_windows(parts.train, cell.lookback, cell.horizon);
        auto val_ws = make_windows(parts.val, cell.lookback, cell.horizon);
        auto test_ws = make_windows(parts.test, cell.lookback, cell.horizon);

        ModelConfig mc;
        mc.mode = mode;
        mc.backbone = suite.backbone;
        mc.lookback_len = cell.lookback;
        mc.horizon_len = cell.horizon;
        mc.n_series = frame.n_series();
        mc.hidden = suite.hidden;
        mc.init = suite.init;
        mc.seed = seed;
        DishModel model = make_model(mc);
        if (mode == NormMode::ZscoreBaseline) set_zscore_stats(model, parts.train);

        TrainConfig tc = suite.base;
        tc.seed = seed;
        TrainResult tr = train(model, train_ws, val_ws, tc);
        if (tr.diverged) {
            run.note = "diverged: " + tr.divergence_note;
            return run;
        }
        EvalResult ev = evaluate(model, test_ws);
        run.mse = ev.mse;
        run.mae = ev.mae;
        run.ok = true;
    } catch (const Error& e) {
        run.note = std::string(e.category()) + ": " + e.what();
    }
    return run;
}

/// Run every (cell, seed, mode) combination and aggregate mean and
/// population std per (cell, mode). A cell with any failed run is excluded
/// from aggregates and improvements, with a warning.
inline BenchSummary run_suite(const BenchSuite& suite) {
    if (suite.cells.empty()) throw Error::input("bench: suite has no cells");
    for (const auto& cell : suite.cells)
        if (cell.seeds.empty()) throw Error::input("bench: cell '" + cell.name + "' has no seeds");

    BenchSummary summary;
    for (const auto& cell : suite.cells) {
        bool cell_ok = true;
        for (std::uint64_t seed : cell.seeds) {
            for (NormMode mode : suite.modes) {
                BenchRun run = bench_run(suite, cell, seed, mode);
                if (!run.ok) {
                    cell_ok = false;
                    summary.warnings.push_back("cell '" + cell.name + "' seed " +
                                               std::to_string(seed) + " mode " + mode_name(mode) +
                                               " failed (" + run.note + "); cell excluded");
                }
                summary.runs.push_back(std::move(run));
            }
        }
        if (!cell_ok) continue;

        for (NormMode mode : suite.modes) {
            BenchAggregate agg;
            agg.cell = cell.name;
            agg.mode = mode;
            std::vector<double> mses, maes;
            for (const auto& run : summary.runs)
                if (run.cell == cell.name && run.mode == mode && run.ok) {
                    mses.push_back(run.mse);
                    maes.push_back(run.mae);
                }
            auto mean_std = [](const std::vector<double>& xs, double& mean, double& stddev) {
                mean = 0.0;
                for (double x : xs) mean += x;
                mean /= static_cast<double>(xs.size());
                double var = 0.0;
                for (double x : xs) var += (x - mean) * (x - mean);
                stddev = std::sqrt(var / static_cast<double>(xs.size()));
            };
            agg.n_seeds = mses.size();
            mean_std(mses, agg.mean_mse, agg.std_mse);
            mean_std(maes, agg.mean_mae, agg.std_mae);
            summary.aggregates.push_back(agg);
        }

        const BenchAggregate* dish = summary.find(cell.name, NormMode::Dish);
        if (dish) {
            for (NormMode baseline : {NormMode::NoneBaseline, NormMode::RevinBaseline}) {
                const BenchAggregate* base = summary.find(cell.name, baseline);
                if (base && base->mean_mse > 0.0)
                    summary.improvements.push_back(
                        {cell.name, baseline, 1.0 - dish->mean_mse / base->mean_mse});
            }
        }
    }
    return summary;
}

/// Fixed-width comparison table.
inline std::string format_summary_table(const BenchSummary& summary) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %-8s %6s %12s %12s %12s %12s\n", "cell", "mode",
                  "seeds", "mean_mse", "std_mse", "mean_mae", "std_mae");
    os << line;
    for (const auto& a : summary.aggregates) {
        std::snprintf(line, sizeof(line), "%-16s %-8s %6zu %12.5f %12.5f %12.5f %12.5f\n",
                      a.cell.c_str(), mode_name(a.mode), a.n_seeds, a.mean_mse, a.std_mse,
                      a.mean_mae, a.std_mae);
        os << line;
    }
    if (!summary.improvements.empty()) os << '\n';
    for (const auto& imp : summary.improvements) {
        std::snprintf(line, sizeof(line), "%-16s improvement of dish over %-8s %8.2f%%\n",
                      imp.cell.c_str(), mode_name(imp.baseline), 100.0 * imp.value);
        os << line;
    }
    for (const auto& w : summary.warnings) os << "warning: " << w << '\n';
    return os.str();
}

/// Canned shifted suite: AR(1) series with piecewise level jumps. Segment
/// boundaries line up with the 7:1:2 split of T=2000 so each partition is
/// internally stationary and the shift sits between partitions: training
/// sees levels 0..16, validation sits at 8, and the test partition runs at
/// an unseen level of 40. A raw-space model carries level-proportional
/// errors there; a normalized one does not.
inline BenchSuite shifted_suite(std::size_t horizon = 16) {
    BenchSuite suite;
    suite.name = "shifted";
    BenchCell cell;
    cell.name = "level_shifts";
    cell.lookback = 48;
    cell.horizon = horizon;
    cell.seeds = {1, 2, 3};
    cell.spec.length = 2000;
    cell.spec.n_series = 4;
    cell.spec.noise = 1.0;
    cell.spec.segments = {
        {0.0, 1.0, 0.5, 350}, {10.0, 1.0, 0.5, 350}, {4.0, 1.0, 0.5, 350},
        {16.0, 1.0, 0.5, 350},  // train: rows [0, 1400)
        {8.0, 1.0, 0.5, 200},   // val:   rows [1400, 1600)
        {40.0, 1.0, 0.5, 400},  // test:  rows [1600, 2000)
    };
    suite.cells.push_back(std::move(cell));
    suite.base.alpha = 0.5;
    suite.base.lr = 1e-3;
    suite.base.batch_size = 64;
    suite.base.patience = 7;
    suite.base.max_epochs = 40;
    return suite;
}

/// Canned stationary control: one regime, no level movement.
inline BenchSuite stationary_suite(std::size_t horizon = 16) {
    BenchSuite suite = shifted_suite(horizon);
    suite.name = "stationary";
    suite.cells.clear();
    BenchCell cell;
    cell.name = "stationary";
    cell.lookback = 48;
    cell.horizon = horizon;
    cell.seeds = {1, 2, 3};
    cell.spec.length = 2000;
    cell.spec.n_series = 4;
    cell.spec.noise = 1.0;
    cell.spec.segments = {{0.0, 1.0, 0.5, 2000}};
    suite.cells.push_back(std::move(cell));
    return suite;
}

/// Suite file: global `key = value` lines plus one `cell ...` line per cell
/// whose spec path is resolved relative to the suite file. Cells must list
/// at least 3 seeds, matching the repeat-and-average protocol.
inline BenchSuite parse_suite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error::input("bench: cannot open suite '" + path + "'");
    const auto base_dir = std::filesystem::path(path).parent_path();

    BenchSuite suite;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);

        if (line.rfind("cell", 0) == 0) {
            BenchCell cell;
            bool have_spec = false;
            std::istringstream fields(line.substr(4));
            std::string tok;
            while (fields >> tok) {
                std::string key, value;
                if (!detail::parse_kv(tok, key, value))
                    throw Error::input(where + ": bad cell field '" + tok + "'");
                if (key == "name") cell.name = value;
                else if (key == "spec") {
                    cell.spec = parse_synthetic_spec((base_dir / value).string());
                    have_spec = true;
                } else if (key == "L") cell.lookback = detail::to_u64(value, where);
                else if (key == "H") cell.horizon = detail::to_u64(value, where);
                else if (key == "seeds") {
                    for (const auto& s : detail::split(value, ','))
                        cell.seeds.push_back(detail::to_u64(detail::trim(s), where));
                } else throw Error::input(where + ": unknown cell field '" + key + "'");
            }
            if (cell.name.empty()) throw Error::input(where + ": cell needs a name");
            if (!have_spec) throw Error::input(where + ": cell needs a spec path");
            if (cell.seeds.size() < 3)
                throw Error::input(where + ": cell '" + cell.name + "' needs at least 3 seeds");
            suite.cells.push_back(std::move(cell));
            continue;
        }

        std::string key, value;
        if (!detail::parse_kv(line, key, value))
            throw Error::input(where + ": expected 'key = value' or a cell line");
        if (key == "name") suite.name = value;
        else if (key == "modes") {
            suite.modes.clear();
            for (const auto& m : detail::split(value, ','))
                suite.modes.push_back(parse_mode(detail::trim(m)));
        } else if (key == "backbone") suite.backbone = parse_backbone(value);
        else if (key == "init") suite.init = parse_init(value);
        else if (key == "hidden") suite.hidden = detail::to_u64(value, where);
        else if (key == "split") suite.split = SplitSpec::parse(value);
        else if (key == "alpha") suite.base.alpha = detail::to_double(value, where);
        else if (key == "lr") suite.base.lr = detail::to_double(value, where);
        else if (key == "batch") suite.base.batch_size = detail::to_u64(value, where);
        else if (key == "patience") suite.base.patience = detail::to_u64(value, where);
        else if (key == "max_epochs") suite.base.max_epochs = detail::to_u64(value, where);
        else throw Error::input(where + ": unknown key '" + key + "'");
    }
    if (suite.cells.empty()) throw Error::input("bench: suite '" + path + "' has no cells");
    return suite;
}

}  // namespace dishts
