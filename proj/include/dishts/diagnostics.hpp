#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dishts/conet.hpp"
#include "dishts/error.hpp"
#include "dishts/series.hpp"

namespace dishts {

/// Per-series mean and floored population std of one window.
struct WindowStats {
    std::vector<double> mean;
    std::vector<double> stddev;
};

inline WindowStats window_stats(const Tensor& window) {
    if (window.rank() != 2)
        throw Error::internal("window stats: need rank-2 window, got " +
                              shape_str(window.shape()));
    const std::size_t len = window.rows();
    const std::size_t n = window.cols();
    WindowStats stats;
    stats.mean.assign(n, 0.0);
    stats.stddev.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double mean = 0.0;
        for (std::size_t r = 0; r < len; ++r) mean += window(r, i);
        mean /= static_cast<double>(len);
        double var = 0.0;
        for (std::size_t r = 0; r < len; ++r) {
            double d = window(r, i) - mean;
            var += d * d;
        }
        stats.mean[i] = mean;
        stats.stddev[i] = std::max(std::sqrt(var / static_cast<double>(len)), kScaleFloor);
    }
    return stats;
}

/// KL(N(mean1, std1^2) || N(mean2, std2^2)); stds must be floored.
inline double gaussian_kl(double mean1, double std1, double mean2, double std2) {
    const double var1 = std1 * std1;
    const double var2 = std2 * std2;
    return std::log(std2 / std1) + (var1 + (mean1 - mean2) * (mean1 - mean2)) / (2.0 * var2) - 0.5;
}

/// Distances between the Gaussians implied by per-window (mean, std), for
/// every series: pairwise between sampled lookbacks (intra-space) and
/// between each lookback and its paired horizon (inter-space). `delta` is a
/// reporting threshold only; it never feeds training.
struct ShiftReport {
    std::vector<std::size_t> anchors;
    std::size_t n_series = 0;
    double delta = 0.1;
    bool symmetric = false;
    std::vector<double> intra;     // [pair k][series i] at k * n_series + i
    std::vector<std::size_t> intra_u, intra_v;  // anchor indices per pair
    std::vector<double> inter;     // [anchor a][series i]
    std::vector<char> intra_flag, inter_flag;

    std::size_t n_pairs() const { return intra_u.size(); }
    double intra_at(std::size_t pair, std::size_t series) const {
        return intra[pair * n_series + series];
    }
    double inter_at(std::size_t anchor, std::size_t series) const {
        return inter[anchor * n_series + series];
    }
    bool intra_flagged(std::size_t pair, std::size_t series) const {
        return intra_flag[pair * n_series + series] != 0;
    }
    bool inter_flagged(std::size_t anchor, std::size_t series) const {
        return inter_flag[anchor * n_series + series] != 0;
    }

    std::size_t count_inter_flags() const {
        std::size_t c = 0;
        for (char f : inter_flag) c += f != 0;
        return c;
    }
    std::size_t count_intra_flags() const {
        std::size_t c = 0;
        for (char f : intra_flag) c += f != 0;
        return c;
    }
};

/// Evenly spaced anchors over the valid range [L, T-H].
inline std::vector<std::size_t> spread_anchors(std::size_t total, std::size_t lookback_len,
                                               std::size_t horizon_len, std::size_t count) {
    if (count < 2) throw Error::input("shift scan: need at least 2 anchors");
    if (total < lookback_len + horizon_len)
        throw Error::input("shift scan: series length " + std::to_string(total) +
                           " too short for lookback " + std::to_string(lookback_len) +
                           " + horizon " + std::to_string(horizon_len));
    const std::size_t lo = lookback_len;
    const std::size_t hi = total - horizon_len;
    std::vector<std::size_t> anchors;
    anchors.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        double frac = static_cast<double>(j) / static_cast<double>(count - 1);
        std::size_t a = lo + static_cast<std::size_t>(frac * static_cast<double>(hi - lo) + 0.5);
        if (anchors.empty() || anchors.back() != a) anchors.push_back(a);
    }
    return anchors;
}

inline ShiftReport shift_scan(const SeriesFrame& frame, std::size_t lookback_len,
                              std::size_t horizon_len, double delta, std::size_t sample_anchors,
                              bool symmetric = false) {
    ShiftReport report;
    report.anchors = spread_anchors(frame.length(), lookback_len, horizon_len, sample_anchors);
    report.n_series = frame.n_series();
    report.delta = delta;
    report.symmetric = symmetric;

    auto window_of = [&](std::size_t begin, std::size_t len) {
        Tensor w = Tensor::zeros({len, frame.n_series()});
        for (std::size_t r = 0; r < len; ++r)
            for (std::size_t i = 0; i < frame.n_series(); ++i) w(r, i) = frame.at(begin + r, i);
        return w;
    };
    auto distance = [&](double m1, double s1, double m2, double s2) {
        double d = gaussian_kl(m1, s1, m2, s2);
        if (symmetric) d = 0.5 * (d + gaussian_kl(m2, s2, m1, s1));
        return std::fabs(d);
    };

    std::vector<WindowStats> look, hori;
    for (std::size_t a : report.anchors) {
        look.push_back(window_stats(window_of(a - lookback_len, lookback_len)));
        hori.push_back(window_stats(window_of(a, horizon_len)));
    }

    const std::size_t n = report.n_series;
    for (std::size_t u = 0; u < report.anchors.size(); ++u) {
        for (std::size_t v = u + 1; v < report.anchors.size(); ++v) {
            report.intra_u.push_back(u);
            report.intra_v.push_back(v);
            for (std::size_t i = 0; i < n; ++i) {
                double d = distance(look[u].mean[i], look[u].stddev[i], look[v].mean[i],
                                    look[v].stddev[i]);
                report.intra.push_back(d);
                report.intra_flag.push_back(d > delta ? 1 : 0);
            }
        }
    }
    for (std::size_t a = 0; a < report.anchors.size(); ++a) {
        for (std::size_t i = 0; i < n; ++i) {
            double d =
                distance(look[a].mean[i], look[a].stddev[i], hori[a].mean[i], hori[a].stddev[i]);
            report.inter.push_back(d);
            report.inter_flag.push_back(d > delta ? 1 : 0);
        }
    }
    return report;
}

/// MSE/MAE over flat forecast/target arrays, plus readability-scaled copies.
struct Metrics {
    double mse = 0.0;
    double mae = 0.0;
    double scaled_mse = 0.0;
    double scaled_mae = 0.0;
};

inline Metrics eval_metrics(const std::vector<double>& forecasts,
                            const std::vector<double>& targets, double scale_mse = 1.0,
                            double scale_mae = 1.0) {
    if (forecasts.empty() || forecasts.size() != targets.size())
        throw Error::internal("metrics: need matching non-empty forecast/target arrays");
    Metrics m;
    for (std::size_t k = 0; k < forecasts.size(); ++k) {
        double d = forecasts[k] - targets[k];
        m.mse += d * d;
        m.mae += std::fabs(d);
    }
    m.mse /= static_cast<double>(forecasts.size());
    m.mae /= static_cast<double>(forecasts.size());
    m.scaled_mse = m.mse * scale_mse;
    m.scaled_mae = m.mae * scale_mae;
    return m;
}

}  // namespace dishts
