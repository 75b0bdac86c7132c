#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dishts/pipeline.hpp"
#include "dishts/rng.hpp"
#include "test_support.hpp"

using namespace dishts;

namespace {

Tensor random_window(Rng& rng, std::size_t lb, std::size_t n, double lo = -2, double hi = 2) {
    Tensor w = Tensor::zeros({lb, n});
    for (std::size_t k = 0; k < w.numel(); ++k) w.at(k) = rng.uniform(lo, hi);
    return w;
}

/// Dish model whose horizon net rows are copies of the input-side rows, so
/// both coefficient sets coincide on every window.
DishModel shared_coeff_identity_model(std::size_t lb, std::size_t hz, std::size_t n,
                                      InitStrategy init, std::uint64_t seed) {
    ModelConfig cfg;
    cfg.mode = NormMode::Dish;
    cfg.backbone = BackboneKind::Identity;
    cfg.lookback_len = lb;
    cfg.horizon_len = hz;
    cfg.n_series = n;
    cfg.init = init;
    cfg.seed = seed;
    DishModel m = make_model(cfg);
    for (std::size_t i = 0; i < n; ++i)
        m.store.value(m.dual.hori.row_params[i]) = m.store.value(m.dual.back.row_params[i]);
    return m;
}

}  // namespace

TEST_CASE("normalize and denormalize hand values") {
    DistCoeffs c;
    c.level = {4.0};
    c.scale = {2.0};
    Tensor x({3, 1}, {2, 4, 6});
    Tensor normed = normalize(x, c);
    CHECK(normed.at(0) == -1.0);
    CHECK(normed.at(1) == 0.0);
    CHECK(normed.at(2) == 1.0);
    Tensor back = denormalize(normed, c);
    for (std::size_t k = 0; k < 3; ++k) CHECK(back.at(k) == x.at(k));

    DistCoeffs neutral;
    neutral.level = {0.0};
    neutral.scale = {1.0};
    Tensor same = normalize(x, neutral);
    for (std::size_t k = 0; k < 3; ++k) CHECK(same.at(k) == x.at(k));

    DistCoeffs c2;
    c2.level = {1.5};
    c2.scale = {3.0};
    Tensor y({1, 1}, {0.5});
    CHECK(denormalize(y, c2).at(0) == 3.0);

    DistCoeffs center;
    center.level = {2.0};
    center.scale = {1.0};
    Tensor z({3, 1}, {1, 2, 3});
    Tensor zc = normalize(z, center);
    CHECK(zc.at(0) == -1.0);
    CHECK(zc.at(1) == 0.0);
    CHECK(zc.at(2) == 1.0);
}

TEST_CASE("hand-composed two-stage pass with an identity backbone") {
    // back=(2,1), hori=(5,1), x=[1,2,3], H=1: (3-2)/1 forecast 1, then 1*1+5.
    ModelConfig cfg;
    cfg.mode = NormMode::Dish;
    cfg.backbone = BackboneKind::Identity;
    cfg.lookback_len = 3;
    cfg.horizon_len = 1;
    cfg.n_series = 1;
    DishModel m = make_model(cfg);
    // weights chosen so the pre-activations land exactly on 2 and 5
    {
        Tensor& bw = m.store.value(m.dual.back.row_params[0]);
        bw.at(0) = 2.0; bw.at(1) = 0.0; bw.at(2) = 0.0;
        Tensor& hw = m.store.value(m.dual.hori.row_params[0]);
        hw.at(0) = 5.0; hw.at(1) = 0.0; hw.at(2) = 0.0;
    }
    Tensor x({3, 1}, {1, 2, 3});
    // back level = 2, back scale = sqrt(((1-2)^2+(2-2)^2+(3-2)^2)/3) = sqrt(2/3)
    // hori level = 5, hori scale = sqrt(((1-5)^2+(2-5)^2+(3-5)^2)/3)
    double back_scale = std::sqrt(2.0 / 3.0);
    double hori_scale = std::sqrt((16.0 + 9.0 + 4.0) / 3.0);
    double expected = hori_scale * ((3.0 - 2.0) / back_scale) + 5.0;
    Tensor f = predict(m, x);
    CHECK(std::fabs(f.at(0) - expected) < 1e-12);

    // with scale-neutral coefficients the hand value is 3 - 2 + 5 = 6
    DistCoeffs back{{2.0}, {1.0}};
    DistCoeffs hori{{5.0}, {1.0}};
    Tensor raw = normalize(x, back);
    Tensor manual = denormalize(Tensor({1, 1}, {raw(2, 0)}), hori);
    CHECK(manual.at(0) == 6.0);
}

TEST_CASE("round-trip identity: shared coefficients reproduce the raw tail") {
    Rng rng(6001);
    for (InitStrategy init : {InitStrategy::Avg, InitStrategy::Uniform, InitStrategy::Norm}) {
        DishModel m = shared_coeff_identity_model(6, 3, 2, init, 42);
        for (int trial = 0; trial < 60; ++trial) {
            Tensor x = random_window(rng, 6, 2, -4, 4);
            Tensor f = predict(m, x);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t r = 0; r < 3; ++r)
                    REQUIRE(std::fabs(f(r, i) - x(3 + r, i)) < 1e-10);
        }
    }
}

TEST_CASE("none mode with identity backbone is the persistence forecast") {
    ModelConfig cfg;
    cfg.mode = NormMode::NoneBaseline;
    cfg.backbone = BackboneKind::Identity;
    cfg.lookback_len = 4;
    cfg.horizon_len = 2;
    cfg.n_series = 1;
    DishModel m = make_model(cfg);
    Tensor x({4, 1}, {9, 8, 7, 6});
    Tensor f = predict(m, x);
    CHECK(f.at(0) == 7.0);
    CHECK(f.at(1) == 6.0);
}

TEST_CASE("revin baseline is affine-equivariant under window shifts") {
    ModelConfig cfg;
    cfg.mode = NormMode::RevinBaseline;
    cfg.backbone = BackboneKind::Linear;
    cfg.lookback_len = 8;
    cfg.horizon_len = 4;
    cfg.n_series = 2;
    cfg.seed = 3;
    DishModel m = make_model(cfg);
    Rng rng(6002);
    for (int trial = 0; trial < 30; ++trial) {
        Tensor x = random_window(rng, 8, 2);
        double shift = rng.uniform(-10, 10);
        Tensor shifted = x;
        for (std::size_t k = 0; k < shifted.numel(); ++k) shifted.at(k) += shift;
        Tensor f0 = predict(m, x);
        Tensor f1 = predict(m, shifted);
        for (std::size_t k = 0; k < f0.numel(); ++k)
            REQUIRE(std::fabs((f1.at(k) - f0.at(k)) - shift) < 1e-9);
    }
}

TEST_CASE("dish with frozen avg conets matches the revin baseline") {
    // Same backbone weights on both paths; positive-mean windows keep the
    // level pre-activation in the linear region, where avg-initialized nets
    // compute exactly the per-window instance statistics.
    ModelConfig dish_cfg;
    dish_cfg.mode = NormMode::Dish;
    dish_cfg.backbone = BackboneKind::Linear;
    dish_cfg.lookback_len = 8;
    dish_cfg.horizon_len = 4;
    dish_cfg.n_series = 2;
    dish_cfg.init = InitStrategy::Avg;
    dish_cfg.seed = 5;
    DishModel dish = make_model(dish_cfg);

    ModelConfig revin_cfg = dish_cfg;
    revin_cfg.mode = NormMode::RevinBaseline;
    DishModel revin = make_model(revin_cfg);
    // copy backbone weights from the dish model
    for (std::size_t i = 0; i < dish_cfg.n_series; ++i) {
        revin.store.value(revin.backbone.w[i]) = dish.store.value(dish.backbone.w[i]);
        revin.store.value(revin.backbone.b[i]) = dish.store.value(dish.backbone.b[i]);
    }

    Rng rng(6003);
    for (int trial = 0; trial < 100; ++trial) {
        Tensor x = random_window(rng, 8, 2, 0.5, 4.0);  // positive mean
        Tensor fd = predict(dish, x);
        Tensor fr = predict(revin, x);
        for (std::size_t k = 0; k < fd.numel(); ++k)
            REQUIRE(std::fabs(fd.at(k) - fr.at(k)) < 1e-9);
    }
}

TEST_CASE("zscore baseline uses fixed train statistics on both sides") {
    ModelConfig cfg;
    cfg.mode = NormMode::ZscoreBaseline;
    cfg.backbone = BackboneKind::Identity;
    cfg.lookback_len = 3;
    cfg.horizon_len = 1;
    cfg.n_series = 1;
    DishModel m = make_model(cfg);

    Tensor train_values({4, 1}, {1, 3, 1, 3});  // mean 2, std 1
    set_zscore_stats(m, SeriesFrame({"a"}, std::move(train_values)));
    CHECK(m.train_mean[0] == 2.0);
    CHECK(m.train_std[0] == 1.0);

    // identity backbone: (x - 2)/1 tail then *1 + 2 restores the raw tail
    Tensor x({3, 1}, {5, 6, 7});
    CHECK(std::fabs(predict(m, x).at(0) - 7.0) < 1e-12);

    ModelConfig unset = cfg;
    DishModel bare = make_model(unset);
    CHECK_THROWS_AS(predict(bare, x), Error);
}

TEST_CASE("end-to-end gradients: 2 series, L=8, H=4") {
    for (BackboneKind kind : {BackboneKind::Linear, BackboneKind::Mlp}) {
        ModelConfig cfg;
        cfg.mode = NormMode::Dish;
        cfg.backbone = kind;
        cfg.lookback_len = 8;
        cfg.horizon_len = 4;
        cfg.n_series = 2;
        cfg.hidden = 4;
        cfg.init = InitStrategy::Uniform;
        cfg.seed = 31;
        DishModel m = make_model(cfg);
        Rng rng(32);
        Tensor x = random_window(rng, 8, 2, 0.5, 3.0);
        Tensor y = random_window(rng, 4, 2, 0.5, 3.0);

        auto loss_of = [&](Tape& tape) {
            ForwardVars out = dish_forward(tape, m, x);
            Var acc{};
            for (std::size_t i = 0; i < 2; ++i) {
                Var se = tape.sum(tape.square(tape.sub(out.forecast[i], tape.leaf(column(y, i)))));
                acc = i == 0 ? se : tape.add(acc, se);
            }
            return acc;
        };
        m.store.zero_grads();
        {
            Tape tape;
            tape.backward(loss_of(tape));
        }
        auto rep = testsup::fd_check(m.store, [&]() {
            Tape tape;
            return tape.value(loss_of(tape)).at(0);
        });
        INFO(backbone_name(kind) << " worst " << rep.worst_param);
        REQUIRE(rep.max_rel_err < 1e-4);
    }
}

TEST_CASE("mode parsing") {
    CHECK(parse_mode("dish") == NormMode::Dish);
    CHECK(parse_mode("revin_baseline") == NormMode::RevinBaseline);
    CHECK(parse_mode("zscore") == NormMode::ZscoreBaseline);
    CHECK(parse_mode("none") == NormMode::NoneBaseline);
    CHECK_THROWS_AS(parse_mode("batchnorm"), Error);
}
