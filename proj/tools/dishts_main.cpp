// dishts command-line front end: train / eval / sweep / diagnose / bench.
//
// Precedence: built-in defaults < command-line flags < --config file.
// Errors print one machine-readable line on stderr (error:<category>: <msg>)
// and map to stable exit codes: 2 input, 3 numeric, 4 internal.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dishts/dishts.hpp"

namespace {

void add_common_options(CLI::App* cmd, dishts::RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "config file (key = value); overrides flags");
    cmd->add_option("--data", cfg.data_csv, "CSV input path");
    cmd->add_option("--synthetic-spec", cfg.synthetic_spec, "synthetic series spec path");
    cmd->add_flag("--drop-timestamp", cfg.drop_timestamp, "ignore the first CSV column");
    cmd->add_option("--lookback", cfg.lookback, "lookback window length L");
    cmd->add_option("--horizon", cfg.horizon, "horizon window length H");
    cmd->add_option("--split", cfg.split, "chronological split ratios, e.g. 7:1:2");
    cmd->add_option("--backbone", cfg.backbone, "identity|linear|mlp");
    cmd->add_option("--hidden", cfg.hidden, "mlp hidden width");
    cmd->add_option("--mode", cfg.mode, "dish|revin|zscore|none");
    cmd->add_option("--init", cfg.init, "coefficient net init: avg|norm|uniform");
    cmd->add_option("--slope", cfg.slope, "leaky ReLU slope");
    cmd->add_option("--alpha", cfg.alpha, "prior-guidance weight");
    cmd->add_option("--lr", cfg.lr, "learning rate");
    cmd->add_option("--batch", cfg.batch, "batch size");
    cmd->add_option("--patience", cfg.patience, "early-stop patience in epochs");
    cmd->add_option("--max-epochs", cfg.max_epochs, "epoch cap");
    cmd->add_option("--seed", cfg.seed, "run seed");
    cmd->add_option("--scale-mse", cfg.scale_mse, "MSE readability scale factor");
    cmd->add_option("--scale-mae", cfg.scale_mae, "MAE readability scale factor");
    cmd->add_option("--out", cfg.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distribution-shift-aware time series forecasting toolkit"};
    app.require_subcommand(1);

    dishts::RunConfig cfg;
    std::string config_path;

    CLI::App* train = app.add_subcommand("train", "fit a model and write artifacts");
    add_common_options(train, cfg, config_path);

    CLI::App* eval = app.add_subcommand("eval", "score a checkpoint on the test partition");
    add_common_options(eval, cfg, config_path);
    eval->add_option("--checkpoint", cfg.checkpoint, "checkpoint to evaluate");

    CLI::App* sweep = app.add_subcommand("sweep", "train across one axis, shared seed");
    add_common_options(sweep, cfg, config_path);
    sweep->add_option("--axis", cfg.sweep_axis, "alpha|lookback|horizon|init");
    sweep->add_option("--values", cfg.sweep_values, "comma-separated axis values");

    CLI::App* diagnose = app.add_subcommand("diagnose", "quantify intra/inter-space shift");
    add_common_options(diagnose, cfg, config_path);
    diagnose->add_option("--delta", cfg.delta, "flag threshold");
    diagnose->add_option("--anchors", cfg.anchors, "number of sampled anchors");
    diagnose->add_flag("--symmetric-kl", cfg.symmetric_kl, "average both KL directions");

    CLI::App* bench = app.add_subcommand("bench", "run a comparison suite");
    add_common_options(bench, cfg, config_path);
    bench->add_option("--suite", cfg.suite, "suite file, or canned: shifted|stationary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0)
            std::cerr << "error:input: " << e.what() << "\n";
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) dishts::load_config_file(cfg, config_path);
        if (train->parsed()) dishts::run_train(cfg);
        else if (eval->parsed()) dishts::run_eval(cfg);
        else if (sweep->parsed()) dishts::run_sweep(cfg);
        else if (diagnose->parsed()) dishts::run_diagnose(cfg);
        else if (bench->parsed()) dishts::run_bench(cfg);
        return 0;
    } catch (const dishts::Error& e) {
        std::cerr << "error:" << e.category() << ": " << e.what() << "\n";
        return dishts::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error:internal: " << e.what() << "\n";
        return dishts::exit_code(dishts::ErrorKind::Internal);
    }
}
