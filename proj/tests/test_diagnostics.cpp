#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dishts/diagnostics.hpp"
#include "dishts/rng.hpp"
#include "dishts/synthetic.hpp"

using namespace dishts;

TEST_CASE("gaussian KL hand values") {
    CHECK(gaussian_kl(3.0, 1.5, 3.0, 1.5) == 0.0);
    CHECK(std::fabs(gaussian_kl(0.0, 1.0, 1.0, 1.0) - 0.5) < 1e-12);
    double expected = std::log(2.0) + 1.0 / 8.0 - 0.5;
    CHECK(std::fabs(gaussian_kl(0.0, 1.0, 0.0, 2.0) - expected) < 1e-12);
    CHECK(std::fabs(expected - 0.31815) < 1e-5);
}

TEST_CASE("gaussian KL is non-negative and zero only at identity") {
    Rng rng(5150);
    for (int trial = 0; trial < 200; ++trial) {
        double m1 = rng.uniform(-5, 5), m2 = rng.uniform(-5, 5);
        double s1 = rng.uniform(0.05, 3), s2 = rng.uniform(0.05, 3);
        double d = gaussian_kl(m1, s1, m2, s2);
        REQUIRE(d >= -1e-12);
        REQUIRE(gaussian_kl(m1, s1, m1, s1) == 0.0);
    }
}

TEST_CASE("window stats use floored population std") {
    Tensor w({4, 2}, {1, 10, 3, 10, 1, 10, 3, 10});
    WindowStats stats = window_stats(w);
    CHECK(stats.mean[0] == 2.0);
    CHECK(stats.stddev[0] == 1.0);
    CHECK(stats.mean[1] == 10.0);
    CHECK(stats.stddev[1] == kScaleFloor);
}

TEST_CASE("shift scan on a constant series finds nothing") {
    SyntheticSpec spec;
    spec.length = 400;
    spec.n_series = 2;
    spec.noise = 0.0;
    spec.segments = {{5.0, 1.0, 0.0, 400}};
    SeriesFrame frame = gen_synthetic(spec);
    ShiftReport report = shift_scan(frame, 24, 8, 0.1, 20);
    CHECK(report.count_inter_flags() == 0);
    CHECK(report.count_intra_flags() == 0);
    for (double d : report.inter) CHECK(d == 0.0);
    for (double d : report.intra) CHECK(d == 0.0);
}

TEST_CASE("shift scan flags concentrate at a level jump") {
    // Window length controls how tightly the per-window statistics
    // concentrate; 256 steps keeps same-segment KL well under the 0.1
    // threshold while any jump-straddling pair lands far above it.
    SyntheticSpec spec;
    spec.length = 3000;
    spec.n_series = 2;
    spec.seed = 33;
    spec.noise = 1.0;
    spec.segments = {{0.0, 1.0, 0.0, 1500}, {10.0, 1.0, 0.0, 1500}};
    SeriesFrame frame = gen_synthetic(spec);
    const std::size_t lb = 256, hz = 256;
    const std::size_t jump = frame.meta().segment_bounds[0];

    ShiftReport report = shift_scan(frame, lb, hz, 0.1, 120);
    REQUIRE(report.count_inter_flags() > 0);
    for (std::size_t a = 0; a < report.anchors.size(); ++a) {
        for (std::size_t i = 0; i < report.n_series; ++i) {
            if (!report.inter_flagged(a, i)) continue;
            std::size_t anchor = report.anchors[a];
            std::size_t dist = anchor > jump ? anchor - jump : jump - anchor;
            REQUIRE(dist <= lb + hz);
        }
    }
    // pairs straddling a 10-std jump carry a large distance
    double max_inter = 0.0;
    for (double d : report.inter) max_inter = std::max(max_inter, d);
    CHECK(max_inter > 10.0);
}

TEST_CASE("flags are monotone in delta") {
    SyntheticSpec spec;
    spec.length = 800;
    spec.n_series = 2;
    spec.seed = 14;
    spec.noise = 1.0;
    spec.segments = {{0.0, 1.0, 0.4, 400}, {4.0, 2.0, 0.4, 400}};
    SeriesFrame frame = gen_synthetic(spec);
    double deltas[] = {0.01, 0.1, 0.5, 2.0};
    std::size_t last_inter = static_cast<std::size_t>(-1);
    std::size_t last_intra = static_cast<std::size_t>(-1);
    for (double delta : deltas) {
        ShiftReport r = shift_scan(frame, 32, 8, delta, 40);
        CHECK(r.count_inter_flags() <= last_inter);
        CHECK(r.count_intra_flags() <= last_intra);
        last_inter = r.count_inter_flags();
        last_intra = r.count_intra_flags();
    }
    ShiftReport inf_delta = shift_scan(frame, 32, 8, 1e300, 40);
    CHECK(inf_delta.count_inter_flags() == 0);
    CHECK(inf_delta.count_intra_flags() == 0);
}

TEST_CASE("duplicate anchors have zero self-distance") {
    // reflexive case: d(u, u) through identical window stats
    Tensor w({6, 1}, {1, 2, 3, 2, 1, 2});
    WindowStats s = window_stats(w);
    CHECK(gaussian_kl(s.mean[0], s.stddev[0], s.mean[0], s.stddev[0]) == 0.0);
}

TEST_CASE("symmetric distance option averages both directions") {
    SyntheticSpec spec;
    spec.length = 600;
    spec.n_series = 1;
    spec.seed = 3;
    spec.noise = 1.0;
    spec.segments = {{0.0, 1.0, 0.2, 300}, {3.0, 1.0, 0.2, 300}};
    SeriesFrame frame = gen_synthetic(spec);
    ShiftReport one_way = shift_scan(frame, 24, 8, 0.1, 10, false);
    ShiftReport two_way = shift_scan(frame, 24, 8, 0.1, 10, true);
    REQUIRE(one_way.inter.size() == two_way.inter.size());
    bool differs = false;
    for (std::size_t k = 0; k < one_way.inter.size(); ++k)
        differs = differs || one_way.inter[k] != two_way.inter[k];
    CHECK(differs);
}

TEST_CASE("eval metrics") {
    SECTION("perfect forecast") {
        Metrics m = eval_metrics({1, 2, 3}, {1, 2, 3});
        CHECK(m.mse == 0.0);
        CHECK(m.mae == 0.0);
        CHECK(m.scaled_mse == 0.0);
        CHECK(m.scaled_mae == 0.0);
    }
    SECTION("hand arithmetic") {
        Metrics m = eval_metrics({1, 2}, {2, 4});
        CHECK(m.mse == 2.5);
        CHECK(m.mae == 1.5);
    }
    SECTION("readability scaling multiplies") {
        Metrics m = eval_metrics({1, 2}, {2, 4}, 1e-1, 1e-2);
        CHECK(std::fabs(m.scaled_mse - 0.25) < 1e-15);
        CHECK(std::fabs(m.scaled_mae - 0.015) < 1e-15);
        CHECK(m.mse == 2.5);  // raw values unchanged
    }
    SECTION("permutation invariance") {
        Metrics a = eval_metrics({1, 5, -2, 0.5}, {0, 4, -1, 2});
        Metrics b = eval_metrics({0.5, -2, 5, 1}, {2, -1, 4, 0});
        CHECK(a.mse == b.mse);
        CHECK(a.mae == b.mae);
    }
    SECTION("empty input is a contract error") {
        CHECK_THROWS_AS(eval_metrics({}, {}), Error);
        CHECK_THROWS_AS(eval_metrics({1.0}, {1.0, 2.0}), Error);
    }
}

TEST_CASE("anchor spreading covers the valid range") {
    auto anchors = spread_anchors(100, 10, 5, 7);
    REQUIRE(anchors.size() >= 2);
    CHECK(anchors.front() == 10);
    CHECK(anchors.back() == 95);
    for (std::size_t k = 1; k < anchors.size(); ++k) CHECK(anchors[k] > anchors[k - 1]);
    CHECK_THROWS_AS(spread_anchors(100, 10, 5, 1), Error);
    CHECK_THROWS_AS(spread_anchors(12, 10, 5, 4), Error);
}
