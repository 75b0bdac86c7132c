#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dishts/error.hpp"
#include "dishts/rng.hpp"
#include "dishts/tape.hpp"
#include "dishts/tensor.hpp"

namespace dishts {

/// Floor for every scaling coefficient; constant windows would otherwise
/// produce a zero divisor in the normalize stage.
inline constexpr double kScaleFloor = kEpsFloor;

/// Per-series distribution coefficients for one window: a level (overall
/// scale, same units as the series) and a scaling (fluctuation about the
/// level, strictly positive after flooring).
struct DistCoeffs {
    std::vector<double> level;
    std::vector<double> scale;

    std::size_t n_series() const { return level.size(); }
};

enum class InitStrategy { Avg, Norm, Uniform };

inline InitStrategy parse_init(const std::string& name) {
    if (name == "avg") return InitStrategy::Avg;
    if (name == "norm") return InitStrategy::Norm;
    if (name == "uniform") return InitStrategy::Uniform;
    throw Error::input("init: unknown strategy '" + name + "' (expected avg|norm|uniform)");
}

inline const char* init_name(InitStrategy s) {
    switch (s) {
        case InitStrategy::Avg: return "avg";
        case InitStrategy::Norm: return "norm";
        case InitStrategy::Uniform: return "uniform";
    }
    return "avg";
}

/// Learnable projection weights of one coefficient net. The conceptual
/// weight tensor is N x L; it is stored as one ParamStore entry per series
/// row so weights are never mixed across series.
struct ConetParams {
    std::size_t n_series = 0;
    std::size_t lookback_len = 0;
    double slope = 0.01;
    InitStrategy init = InitStrategy::Avg;
    std::vector<std::size_t> row_params;  // ParamStore indices, one per series
};

/// Initialize one coefficient net.
///   avg     -> every weight 1/L, so the pre-activation is the window mean
///   norm    -> standard normal draws
///   uniform -> draws in [0, 1)
/// Deterministic per seed.
inline ConetParams init_conet(ParamStore& store, const std::string& name, std::size_t n_series,
                              std::size_t lookback_len, InitStrategy init, std::uint64_t seed,
                              double slope = 0.01) {
    if (n_series < 1 || lookback_len < 1)
        throw Error::input("conet: need n_series >= 1 and lookback >= 1");
    ConetParams params;
    params.n_series = n_series;
    params.lookback_len = lookback_len;
    params.slope = slope;
    params.init = init;
    Rng rng(seed);
    for (std::size_t i = 0; i < n_series; ++i) {
        Tensor row = Tensor::zeros({lookback_len});
        for (std::size_t tau = 0; tau < lookback_len; ++tau) {
            switch (init) {
                case InitStrategy::Avg:
                    row.at(tau) = 1.0 / static_cast<double>(lookback_len);
                    break;
                case InitStrategy::Norm: row.at(tau) = rng.normal(); break;
                case InitStrategy::Uniform: row.at(tau) = rng.uniform01(); break;
            }
        }
        params.row_params.push_back(
            store.add(name + ".v[" + std::to_string(i) + "]", std::move(row)));
    }
    return params;
}

/// Per-series coefficient variables on a tape.
struct ConetVars {
    std::vector<Var> level;
    std::vector<Var> scale;
};

/// Forward pass of the simple projection instance, recorded on the tape so
/// gradients flow through the level into the scaling coefficient:
///   level_i = leaky_relu(sum_tau v[i,tau] * x[i,tau])
///   scale_i = max(sqrt(mean_tau (x[i,tau] - level_i)^2), floor)
/// The mean runs over the L lookback steps (population form).
inline ConetVars conet_forward(Tape& tape, const ConetParams& params, ParamStore& store,
                               const Tensor& lookback) {
    if (lookback.rank() != 2 || lookback.rows() != params.lookback_len ||
        lookback.cols() != params.n_series) {
        throw Error::internal("conet: lookback " + shape_str(lookback.shape()) +
                              " does not match params [" + std::to_string(params.lookback_len) +
                              "x" + std::to_string(params.n_series) + "]");
    }
    ConetVars out;
    for (std::size_t i = 0; i < params.n_series; ++i) {
        Var x = tape.leaf(column(lookback, i));
        Var v = tape.param(store, params.row_params[i]);
        Var level = tape.leaky_relu(tape.sum(tape.mul(v, x)), params.slope);
        Var dev = tape.sub(x, level);
        Var scale = tape.floor_at(tape.sqrt(tape.mean(tape.square(dev))), kScaleFloor);
        out.level.push_back(level);
        out.scale.push_back(scale);
    }
    return out;
}

/// Value-only forward for evaluation and tests.
inline DistCoeffs conet_eval(const ConetParams& params, ParamStore& store,
                             const Tensor& lookback) {
    Tape tape;
    ConetVars vars = conet_forward(tape, params, store, lookback);
    DistCoeffs coeffs;
    for (std::size_t i = 0; i < params.n_series; ++i) {
        coeffs.level.push_back(tape.value(vars.level[i]).at(0));
        coeffs.scale.push_back(tape.value(vars.scale[i]).at(0));
    }
    return coeffs;
}

/// Two coefficient nets with disjoint parameters: one approximates the
/// distribution of the lookback it sees, the other infers the distribution
/// of the horizon it cannot see. Both consume the same lookback.
struct DualConet {
    ConetParams back;
    ConetParams hori;
};

inline DualConet init_dual(ParamStore& store, std::size_t n_series, std::size_t lookback_len,
                           InitStrategy init, std::uint64_t seed, double slope = 0.01) {
    DualConet dual;
    dual.back = init_conet(store, "back", n_series, lookback_len, init, derive_seed(seed, 0), slope);
    dual.hori = init_conet(store, "hori", n_series, lookback_len, init, derive_seed(seed, 1), slope);
    return dual;
}

inline std::pair<ConetVars, ConetVars> dual_forward(Tape& tape, const DualConet& dual,
                                                    ParamStore& store, const Tensor& lookback) {
    return {conet_forward(tape, dual.back, store, lookback),
            conet_forward(tape, dual.hori, store, lookback)};
}

inline std::pair<DistCoeffs, DistCoeffs> dual_eval(const DualConet& dual, ParamStore& store,
                                                   const Tensor& lookback) {
    return {conet_eval(dual.back, store, lookback), conet_eval(dual.hori, store, lookback)};
}

}  // namespace dishts
