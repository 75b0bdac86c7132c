#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dishts/error.hpp"
#include "dishts/rng.hpp"
#include "dishts/tape.hpp"

namespace dishts {

enum class BackboneKind { Identity, Linear, Mlp };

inline BackboneKind parse_backbone(const std::string& name) {
    if (name == "identity") return BackboneKind::Identity;
    if (name == "linear") return BackboneKind::Linear;
    if (name == "mlp") return BackboneKind::Mlp;
    throw Error::input("backbone: unknown kind '" + name + "' (expected identity|linear|mlp)");
}

inline const char* backbone_name(BackboneKind k) {
    switch (k) {
        case BackboneKind::Identity: return "identity";
        case BackboneKind::Linear: return "linear";
        case BackboneKind::Mlp: return "mlp";
    }
    return "identity";
}

/// A forecasting model mapping a normalized L-step lookback to an H-step
/// prediction, per series (channel-independent).
///   identity -> copies the last H rows; parameter-free; needs H <= L
///   linear   -> per-series H x L affine map
///   mlp      -> one two-layer leaky-ReLU net shared by all series
struct BackboneSpec {
    BackboneKind kind = BackboneKind::Linear;
    std::size_t lookback_len = 0;
    std::size_t horizon_len = 0;
    std::size_t n_series = 0;
    std::size_t hidden = 32;
    double slope = 0.01;
    // linear: per-series entries; mlp: shared entries
    std::vector<std::size_t> w, b;
    std::size_t w1 = 0, b1 = 0, w2 = 0, b2 = 0;
};

inline BackboneSpec init_backbone(ParamStore& store, BackboneKind kind, std::size_t lookback_len,
                                  std::size_t horizon_len, std::size_t n_series,
                                  std::size_t hidden, std::uint64_t seed) {
    if (lookback_len < 1 || horizon_len < 1 || n_series < 1)
        throw Error::input("backbone: lookback, horizon and series count must be >= 1");
    BackboneSpec spec;
    spec.kind = kind;
    spec.lookback_len = lookback_len;
    spec.horizon_len = horizon_len;
    spec.n_series = n_series;
    spec.hidden = hidden;
    Rng rng(seed);

    switch (kind) {
        case BackboneKind::Identity:
            if (horizon_len > lookback_len)
                throw Error::input("backbone: identity needs horizon <= lookback, got " +
                                   std::to_string(horizon_len) + " > " +
                                   std::to_string(lookback_len));
            break;
        case BackboneKind::Linear:
            // Start near the persistence map (each output row reads the last
            // lookback step) plus small noise to break symmetry.
            for (std::size_t i = 0; i < n_series; ++i) {
                Tensor w = Tensor::zeros({horizon_len, lookback_len});
                for (std::size_t h = 0; h < horizon_len; ++h) {
                    w(h, lookback_len - 1) = 1.0;
                    for (std::size_t c = 0; c < lookback_len; ++c) w(h, c) += 0.01 * rng.normal();
                }
                spec.w.push_back(store.add("backbone.w[" + std::to_string(i) + "]", std::move(w)));
                spec.b.push_back(store.add("backbone.b[" + std::to_string(i) + "]",
                                           Tensor::zeros({horizon_len})));
            }
            break;
        case BackboneKind::Mlp: {
            if (hidden < 1) throw Error::input("backbone: mlp hidden width must be >= 1");
            auto scaled = [&](std::size_t rows, std::size_t cols, double fan_in) {
                Tensor t = Tensor::zeros({rows, cols});
                double s = std::sqrt(2.0 / fan_in);
                for (std::size_t k = 0; k < t.numel(); ++k) t.at(k) = s * rng.normal();
                return t;
            };
            spec.w1 = store.add("backbone.w1",
                                scaled(hidden, lookback_len, static_cast<double>(lookback_len)));
            spec.b1 = store.add("backbone.b1", Tensor::zeros({hidden}));
            spec.w2 =
                store.add("backbone.w2", scaled(horizon_len, hidden, static_cast<double>(hidden)));
            spec.b2 = store.add("backbone.b2", Tensor::zeros({horizon_len}));
            break;
        }
    }
    return spec;
}

/// Forward one series: a normalized lookback var of shape [L] to a horizon
/// var of shape [H]. The shared mlp entries must be bound to the tape once
/// per pass; callers hand the bound vars back in for every series.
struct BackboneTapeCtx {
    Var w1, b1, w2, b2;
    bool bound = false;
};

inline Var backbone_forward_series(Tape& tape, const BackboneSpec& spec, ParamStore& store,
                                   Var x, std::size_t series, BackboneTapeCtx& ctx) {
    switch (spec.kind) {
        case BackboneKind::Identity: {
            // Tail copy expressed as a constant selector so gradients flow
            // back through the matvec.
            Tensor sel = Tensor::zeros({spec.horizon_len, spec.lookback_len});
            for (std::size_t h = 0; h < spec.horizon_len; ++h)
                sel(h, spec.lookback_len - spec.horizon_len + h) = 1.0;
            return tape.matvec(tape.leaf(std::move(sel)), x);
        }
        case BackboneKind::Linear: {
            Var w = tape.param(store, spec.w[series]);
            Var b = tape.param(store, spec.b[series]);
            return tape.add(tape.matvec(w, x), b);
        }
        case BackboneKind::Mlp: {
            if (!ctx.bound) {
                ctx.w1 = tape.param(store, spec.w1);
                ctx.b1 = tape.param(store, spec.b1);
                ctx.w2 = tape.param(store, spec.w2);
                ctx.b2 = tape.param(store, spec.b2);
                ctx.bound = true;
            }
            Var h = tape.leaky_relu(tape.add(tape.matvec(ctx.w1, x), ctx.b1), spec.slope);
            return tape.add(tape.matvec(ctx.w2, h), ctx.b2);
        }
    }
    throw Error::internal("backbone: unreachable kind");
}

/// All series at once: per-series [L] vars in, per-series [H] vars out.
inline std::vector<Var> backbone_forward(Tape& tape, const BackboneSpec& spec, ParamStore& store,
                                         const std::vector<Var>& series_in) {
    if (series_in.size() != spec.n_series)
        throw Error::internal("backbone: expected " + std::to_string(spec.n_series) +
                              " series, got " + std::to_string(series_in.size()));
    BackboneTapeCtx ctx;
    std::vector<Var> out;
    out.reserve(series_in.size());
    for (std::size_t i = 0; i < series_in.size(); ++i)
        out.push_back(backbone_forward_series(tape, spec, store, series_in[i], i, ctx));
    return out;
}

}  // namespace dishts
