#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dishts/backbone.hpp"
#include "dishts/conet.hpp"
#include "dishts/error.hpp"
#include "dishts/series.hpp"
#include "dishts/tape.hpp"

namespace dishts {

/// Exactly one normalization mode is active per forward pass.
///   dish   -> learned dual-net coefficients; distinct for input and output
///   revin  -> per-window mean/std reused on BOTH sides (assumes lookback
///             and horizon share the same distribution)
///   zscore -> fixed train-set global mean/std on both sides
///   none   -> backbone on raw values
enum class NormMode { Dish, RevinBaseline, ZscoreBaseline, NoneBaseline };

inline NormMode parse_mode(const std::string& name) {
    if (name == "dish") return NormMode::Dish;
    if (name == "revin" || name == "revin_baseline") return NormMode::RevinBaseline;
    if (name == "zscore" || name == "zscore_baseline") return NormMode::ZscoreBaseline;
    if (name == "none" || name == "none_baseline") return NormMode::NoneBaseline;
    throw Error::input("mode: unknown normalization mode '" + name +
                       "' (expected dish|revin|zscore|none)");
}

inline const char* mode_name(NormMode m) {
    switch (m) {
        case NormMode::Dish: return "dish";
        case NormMode::RevinBaseline: return "revin";
        case NormMode::ZscoreBaseline: return "zscore";
        case NormMode::NoneBaseline: return "none";
    }
    return "dish";
}

/// (x - level) / scale, per series. Scales must already be floored.
inline Tensor normalize(const Tensor& lookback, const DistCoeffs& coeffs) {
    Tensor out = Tensor::zeros(lookback.shape());
    for (std::size_t r = 0; r < lookback.rows(); ++r)
        for (std::size_t i = 0; i < lookback.cols(); ++i)
            out(r, i) = (lookback(r, i) - coeffs.level[i]) / coeffs.scale[i];
    return out;
}

/// scale * y + level, per series; inverse of normalize.
inline Tensor denormalize(const Tensor& raw_forecast, const DistCoeffs& coeffs) {
    Tensor out = Tensor::zeros(raw_forecast.shape());
    for (std::size_t r = 0; r < raw_forecast.rows(); ++r)
        for (std::size_t i = 0; i < raw_forecast.cols(); ++i)
            out(r, i) = coeffs.scale[i] * raw_forecast(r, i) + coeffs.level[i];
    return out;
}

struct ModelConfig {
    NormMode mode = NormMode::Dish;
    BackboneKind backbone = BackboneKind::Linear;
    std::size_t lookback_len = 0;
    std::size_t horizon_len = 0;
    std::size_t n_series = 0;
    std::size_t hidden = 32;
    InitStrategy init = InitStrategy::Avg;
    double slope = 0.01;
    std::uint64_t seed = 0;
};

/// The full wrapper: coefficient nets (in dish mode), a backbone, and the
/// fixed statistics the baseline modes need. Owns every learnable tensor.
struct DishModel {
    ModelConfig config;
    ParamStore store;
    DualConet dual;             // populated in dish mode
    BackboneSpec backbone;
    std::vector<double> train_mean, train_std;  // zscore mode, floored

    bool has_zscore_stats() const { return !train_mean.empty(); }
};

inline DishModel make_model(const ModelConfig& cfg) {
    if (cfg.lookback_len < 1 || cfg.horizon_len < 1 || cfg.n_series < 1)
        throw Error::input("model: lookback, horizon and series count must be >= 1");
    DishModel m;
    m.config = cfg;
    if (cfg.mode == NormMode::Dish)
        m.dual = init_dual(m.store, cfg.n_series, cfg.lookback_len, cfg.init,
                           derive_seed(cfg.seed, 11), cfg.slope);
    m.backbone = init_backbone(m.store, cfg.backbone, cfg.lookback_len, cfg.horizon_len,
                               cfg.n_series, cfg.hidden, derive_seed(cfg.seed, 22));
    return m;
}

/// Global per-series mean/std over a training frame, for the zscore mode.
inline void set_zscore_stats(DishModel& model, const SeriesFrame& train) {
    if (train.n_series() != model.config.n_series)
        throw Error::input("model: zscore stats frame has " + std::to_string(train.n_series()) +
                           " series, model expects " + std::to_string(model.config.n_series));
    if (train.length() == 0) throw Error::input("model: zscore stats frame is empty");
    model.train_mean.assign(model.config.n_series, 0.0);
    model.train_std.assign(model.config.n_series, 0.0);
    const double t = static_cast<double>(train.length());
    for (std::size_t i = 0; i < train.n_series(); ++i) {
        double mean = 0.0;
        for (std::size_t r = 0; r < train.length(); ++r) mean += train.at(r, i);
        mean /= t;
        double var = 0.0;
        for (std::size_t r = 0; r < train.length(); ++r) {
            double d = train.at(r, i) - mean;
            var += d * d;
        }
        model.train_mean[i] = mean;
        model.train_std[i] = std::max(std::sqrt(var / t), kScaleFloor);
    }
}

/// Forward-pass outputs: per-series horizon vars, plus the inferred output
/// level coefficients when the model has a horizon net (dish mode only) --
/// those feed the prior-guidance loss term.
struct ForwardVars {
    std::vector<Var> forecast;    // n_series vars of shape [H]
    std::vector<Var> hori_level;  // n_series scalars; empty in baseline modes
};

namespace detail {

/// Per-window mean and floored population std of one series column.
inline void window_mean_std(const Tensor& lookback, std::size_t i, double& mean, double& stddev) {
    const std::size_t len = lookback.rows();
    mean = 0.0;
    for (std::size_t r = 0; r < len; ++r) mean += lookback(r, i);
    mean /= static_cast<double>(len);
    double var = 0.0;
    for (std::size_t r = 0; r < len; ++r) {
        double d = lookback(r, i) - mean;
        var += d * d;
    }
    stddev = std::max(std::sqrt(var / static_cast<double>(len)), kScaleFloor);
}

}  // namespace detail

/// The two-stage pass: normalize the lookback with input-side coefficients,
/// run the backbone, denormalize the output with output-side coefficients.
/// Baseline modes swap in their own coefficient sources; `none` skips both
/// stages.
inline ForwardVars dish_forward(Tape& tape, DishModel& model, const Tensor& lookback) {
    const ModelConfig& cfg = model.config;
    if (lookback.rank() != 2 || lookback.rows() != cfg.lookback_len ||
        lookback.cols() != cfg.n_series) {
        throw Error::internal("forward: lookback " + shape_str(lookback.shape()) +
                              " does not match model [" + std::to_string(cfg.lookback_len) + "x" +
                              std::to_string(cfg.n_series) + "]");
    }

    std::vector<Var> series_in;
    series_in.reserve(cfg.n_series);
    for (std::size_t i = 0; i < cfg.n_series; ++i) series_in.push_back(tape.leaf(column(lookback, i)));

    ForwardVars out;
    switch (cfg.mode) {
        case NormMode::Dish: {
            auto [back, hori] = dual_forward(tape, model.dual, model.store, lookback);
            std::vector<Var> normed;
            normed.reserve(cfg.n_series);
            for (std::size_t i = 0; i < cfg.n_series; ++i)
                normed.push_back(tape.div(tape.sub(series_in[i], back.level[i]), back.scale[i]));
            std::vector<Var> raw = backbone_forward(tape, model.backbone, model.store, normed);
            for (std::size_t i = 0; i < cfg.n_series; ++i) {
                out.forecast.push_back(tape.add(tape.mul(raw[i], hori.scale[i]), hori.level[i]));
                out.hori_level.push_back(hori.level[i]);
            }
            break;
        }
        case NormMode::RevinBaseline: {
            std::vector<Var> normed, mu, sd;
            for (std::size_t i = 0; i < cfg.n_series; ++i) {
                double mean, stddev;
                detail::window_mean_std(lookback, i, mean, stddev);
                mu.push_back(tape.leaf(mean));
                sd.push_back(tape.leaf(stddev));
                normed.push_back(tape.div(tape.sub(series_in[i], mu[i]), sd[i]));
            }
            std::vector<Var> raw = backbone_forward(tape, model.backbone, model.store, normed);
            for (std::size_t i = 0; i < cfg.n_series; ++i)
                out.forecast.push_back(tape.add(tape.mul(raw[i], sd[i]), mu[i]));
            break;
        }
        case NormMode::ZscoreBaseline: {
            if (!model.has_zscore_stats())
                throw Error::internal("forward: zscore mode without train stats");
            std::vector<Var> normed;
            for (std::size_t i = 0; i < cfg.n_series; ++i) {
                Var mu = tape.leaf(model.train_mean[i]);
                Var sd = tape.leaf(model.train_std[i]);
                normed.push_back(tape.div(tape.sub(series_in[i], mu), sd));
            }
            std::vector<Var> raw = backbone_forward(tape, model.backbone, model.store, normed);
            for (std::size_t i = 0; i < cfg.n_series; ++i) {
                Var mu = tape.leaf(model.train_mean[i]);
                Var sd = tape.leaf(model.train_std[i]);
                out.forecast.push_back(tape.add(tape.mul(raw[i], sd), mu));
            }
            break;
        }
        case NormMode::NoneBaseline:
            out.forecast = backbone_forward(tape, model.backbone, model.store, series_in);
            break;
    }
    return out;
}

/// Collect per-series forecast vars into an H x N tensor.
inline Tensor forecast_values(const Tape& tape, const ForwardVars& vars, std::size_t horizon_len,
                              std::size_t n_series) {
    Tensor out = Tensor::zeros({horizon_len, n_series});
    for (std::size_t i = 0; i < n_series; ++i) {
        const Tensor& f = tape.value(vars.forecast[i]);
        for (std::size_t r = 0; r < horizon_len; ++r) out(r, i) = f.at(r);
    }
    return out;
}

/// Value-only forward.
inline Tensor predict(DishModel& model, const Tensor& lookback) {
    Tape tape;
    ForwardVars vars = dish_forward(tape, model, lookback);
    return forecast_values(tape, vars, model.config.horizon_len, model.config.n_series);
}

}  // namespace dishts
