#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dishts/error.hpp"
#include "dishts/pipeline.hpp"
#include "dishts/rng.hpp"
#include "dishts/series.hpp"
#include "dishts/tape.hpp"

namespace dishts {

struct TrainConfig {
    double alpha = 0.5;          // prior-guidance weight
    double lr = 1e-3;
    std::size_t batch_size = 64;
    std::size_t max_epochs = 50;
    std::size_t patience = 7;    // early-stop steps
    std::uint64_t seed = 0;

    void validate() const {
        if (alpha < 0) throw Error::input("train: alpha must be >= 0");
        if (lr <= 0) throw Error::input("train: learning rate must be > 0");
        if (batch_size < 1) throw Error::input("train: batch size must be >= 1");
        if (max_epochs < 1) throw Error::input("train: max epochs must be >= 1");
        if (patience < 1) throw Error::input("train: patience must be >= 1");
    }
};

/// Loss pieces for one window, all on the tape. total = mse + alpha*guidance
/// with mse the squared error summed over horizon steps and series, and
/// guidance pulling each inferred output level toward the mean of its target
/// horizon. Scaling coefficients are left unguided. Baseline modes have no
/// output level to guide, so their guidance term is exactly zero.
struct LossVars {
    Var total, mse, guidance;
};

inline LossVars dish_loss(Tape& tape, const ForwardVars& out, const Tensor& target,
                          double alpha) {
    if (alpha < 0) throw Error::input("loss: alpha must be >= 0");
    const std::size_t n = out.forecast.size();
    if (target.rank() != 2 || target.cols() != n)
        throw Error::internal("loss: target " + shape_str(target.shape()) + " does not match " +
                              std::to_string(n) + " forecast series");

    LossVars lv;
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
        Var y = tape.leaf(column(target, i));
        Var se = tape.sum(tape.square(tape.sub(out.forecast[i], y)));
        lv.mse = first ? se : tape.add(lv.mse, se);
        first = false;
    }

    if (!out.hori_level.empty()) {
        bool gfirst = true;
        for (std::size_t i = 0; i < n; ++i) {
            double target_mean = 0.0;
            for (std::size_t r = 0; r < target.rows(); ++r) target_mean += target(r, i);
            target_mean /= static_cast<double>(target.rows());
            Var g = tape.square(tape.sub(tape.leaf(target_mean), out.hori_level[i]));
            lv.guidance = gfirst ? g : tape.add(lv.guidance, g);
            gfirst = false;
        }
    } else {
        lv.guidance = tape.leaf(0.0);
    }

    lv.total = tape.add(lv.mse, tape.mul(tape.leaf(alpha), lv.guidance));
    return lv;
}

/// Value-only loss for one (forecast, target, hori_level) triple.
struct LossValues {
    double total, mse, guidance;
};

inline LossValues dish_loss_values(DishModel& model, const Tensor& lookback, const Tensor& target,
                                   double alpha) {
    Tape tape;
    ForwardVars out = dish_forward(tape, model, lookback);
    LossVars lv = dish_loss(tape, out, target, alpha);
    return {tape.value(lv.total).at(0), tape.value(lv.mse).at(0), tape.value(lv.guidance).at(0)};
}

/// Standard bias-corrected Adam over a ParamStore.
struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class AdamState {
public:
    explicit AdamState(const ParamStore& store, AdamConfig cfg = {}) : cfg_(cfg) {
        for (std::size_t i = 0; i < store.size(); ++i) {
            m_.push_back(Tensor::zeros(store.value(i).shape()));
            v_.push_back(Tensor::zeros(store.value(i).shape()));
        }
    }

    std::size_t step_count() const { return t_; }

    /// One update from the gradients currently in the store. Aborts before
    /// touching any parameter if a gradient is non-finite.
    void step(ParamStore& store, double lr) {
        if (store.size() != m_.size())
            throw Error::internal("adam: store size changed after state creation");
        for (std::size_t i = 0; i < store.size(); ++i) {
            if (!store.grad(i).all_finite())
                throw Error::numeric("adam: non-finite gradient for parameter '" + store.name(i) +
                                     "'");
        }
        ++t_;
        const double corr1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double corr2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < store.size(); ++i) {
            Tensor& value = store.value(i);
            const Tensor& grad = store.grad(i);
            for (std::size_t k = 0; k < value.numel(); ++k) {
                double g = grad.at(k);
                double& m = m_[i].at(k);
                double& v = v_[i].at(k);
                m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
                v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g * g;
                double mhat = m / corr1;
                double vhat = v / corr2;
                value.at(k) -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
            }
        }
    }

private:
    AdamConfig cfg_;
    std::vector<Tensor> m_, v_;
    std::size_t t_ = 0;
};

/// Patience-based early stopping with best-checkpoint snapshotting.
/// observe() returns true once the metric has failed to improve for
/// `patience` consecutive epochs.
class EarlyStopper {
public:
    explicit EarlyStopper(std::size_t patience) : patience_(patience) {
        if (patience < 1) throw Error::input("early stop: patience must be >= 1");
    }

    bool observe(double metric, const ParamStore& params) {
        ++epoch_;
        if (metric < best_metric_) {
            best_metric_ = metric;
            best_epoch_ = epoch_;
            bad_streak_ = 0;
            best_values_ = params.snapshot();
            has_best_ = true;
            return false;
        }
        return ++bad_streak_ >= patience_;
    }

    double best_metric() const { return best_metric_; }
    std::size_t best_epoch() const { return best_epoch_; }
    bool has_snapshot() const { return has_best_; }

    void restore(ParamStore& params) const {
        if (has_best_) params.restore(best_values_);
    }

private:
    std::size_t patience_;
    std::size_t epoch_ = 0;
    std::size_t bad_streak_ = 0;
    std::size_t best_epoch_ = 0;
    bool has_best_ = false;
    double best_metric_ = std::numeric_limits<double>::infinity();
    std::vector<Tensor> best_values_;
};

/// Forecast quality on denormalized outputs against raw targets.
struct EvalResult {
    double mse = 0.0;
    double mae = 0.0;
    std::vector<double> per_series_mse, per_series_mae;
    std::size_t n_windows = 0;
};

inline EvalResult evaluate(DishModel& model, const std::vector<WindowPair>& windows) {
    if (windows.empty()) throw Error::input("evaluate: empty window set");
    const std::size_t n = model.config.n_series;
    const std::size_t h = model.config.horizon_len;
    EvalResult res;
    res.per_series_mse.assign(n, 0.0);
    res.per_series_mae.assign(n, 0.0);
    for (const WindowPair& w : windows) {
        Tensor forecast = predict(model, w.lookback);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t r = 0; r < h; ++r) {
                double d = forecast(r, i) - w.horizon(r, i);
                res.per_series_mse[i] += d * d;
                res.per_series_mae[i] += std::fabs(d);
            }
        }
    }
    const double per_series_count = static_cast<double>(windows.size() * h);
    for (std::size_t i = 0; i < n; ++i) {
        res.mse += res.per_series_mse[i];
        res.mae += res.per_series_mae[i];
        res.per_series_mse[i] /= per_series_count;
        res.per_series_mae[i] /= per_series_count;
    }
    res.mse /= per_series_count * static_cast<double>(n);
    res.mae /= per_series_count * static_cast<double>(n);
    res.n_windows = windows.size();
    return res;
}

struct EpochRecord {
    std::size_t epoch;
    double train_loss;
    double val_mse;
};

struct TrainResult {
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
    double best_val_mse = std::numeric_limits<double>::infinity();
    bool diverged = false;
    std::string divergence_note;
};

/// Gradient training with uniform random anchor sampling, per-epoch
/// validation on denormalized forecasts, and patience-based early stopping.
/// The model ends holding the best-validation parameters (or the last good
/// snapshot when a step diverges). Single-threaded and bit-deterministic for
/// a fixed config and seed.
inline TrainResult train(DishModel& model, const std::vector<WindowPair>& train_set,
                         const std::vector<WindowPair>& val_set, const TrainConfig& cfg) {
    cfg.validate();
    if (train_set.empty()) throw Error::input("train: empty training set");
    if (val_set.empty()) throw Error::input("train: empty validation set");

    Rng rng(derive_seed(cfg.seed, 33));
    AdamState adam(model.store);
    EarlyStopper stopper(cfg.patience);
    std::vector<Tensor> initial = model.store.snapshot();
    const std::size_t steps_per_epoch = std::max<std::size_t>(1, train_set.size() / cfg.batch_size);

    TrainResult result;
    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        double epoch_loss = 0.0;
        std::size_t seen = 0;
        try {
            for (std::size_t step = 0; step < steps_per_epoch; ++step) {
                model.store.zero_grads();
                Tape tape;
                Var batch_total{};
                for (std::size_t k = 0; k < cfg.batch_size; ++k) {
                    const WindowPair& w = train_set[rng.index(train_set.size())];
                    ForwardVars out = dish_forward(tape, model, w.lookback);
                    LossVars lv = dish_loss(tape, out, w.horizon, cfg.alpha);
                    batch_total = k == 0 ? lv.total : tape.add(batch_total, lv.total);
                }
                tape.backward(batch_total);
                adam.step(model.store, cfg.lr);
                epoch_loss += tape.value(batch_total).at(0);
                seen += cfg.batch_size;
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Numeric) throw;
            result.diverged = true;
            result.divergence_note = e.what();
            break;
        }

        double val_mse = evaluate(model, val_set).mse;
        result.history.push_back({epoch, epoch_loss / static_cast<double>(seen), val_mse});
        if (stopper.observe(val_mse, model.store)) break;
    }

    if (stopper.has_snapshot()) {
        stopper.restore(model.store);
        result.best_epoch = stopper.best_epoch();
        result.best_val_mse = stopper.best_metric();
    } else {
        model.store.restore(initial);
    }
    return result;
}

}  // namespace dishts
