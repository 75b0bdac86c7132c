#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dishts/error.hpp"
#include "dishts/tensor.hpp"

namespace dishts {

struct FrameMeta {
    std::string source;
    std::string freq_label;
    /// Start indices of every segment after the first, when the frame came
    /// from the synthetic generator. Ground truth for shift diagnostics.
    std::vector<std::size_t> segment_bounds;
};

/// N named series of common length T, immutable after construction and safe
/// to share read-only across threads. Values are finite by construction.
class SeriesFrame {
public:
    SeriesFrame(std::vector<std::string> names, Tensor values, FrameMeta meta = {})
        : names_(std::move(names)), values_(std::move(values)), meta_(std::move(meta)) {
        if (values_.rank() != 2)
            throw Error::internal("series frame: values must be rank-2, got " +
                                  shape_str(values_.shape()));
        if (names_.size() != values_.cols())
            throw Error::internal("series frame: " + std::to_string(names_.size()) +
                                  " names for " + std::to_string(values_.cols()) + " columns");
        if (!values_.all_finite())
            throw Error::input("series frame: non-finite value in input data");
    }

    std::size_t length() const { return values_.rows(); }
    std::size_t n_series() const { return values_.cols(); }
    const std::vector<std::string>& names() const { return names_; }
    const Tensor& values() const { return values_; }
    const FrameMeta& meta() const { return meta_; }
    double at(std::size_t t, std::size_t i) const { return values_(t, i); }

    /// Rows [begin, end), keeping names and labels.
    SeriesFrame slice_rows(std::size_t begin, std::size_t end) const {
        if (begin > end || end > length())
            throw Error::internal("series frame: bad row slice [" + std::to_string(begin) + ", " +
                                  std::to_string(end) + ") of " + std::to_string(length()));
        std::size_t n = n_series();
        Tensor out = Tensor::zeros({end - begin, n});
        for (std::size_t t = begin; t < end; ++t)
            for (std::size_t i = 0; i < n; ++i) out(t - begin, i) = values_(t, i);
        FrameMeta meta = meta_;
        meta.segment_bounds.clear();
        for (std::size_t b : meta_.segment_bounds)
            if (b >= begin && b < end) meta.segment_bounds.push_back(b - begin);
        return SeriesFrame(names_, std::move(out), std::move(meta));
    }

private:
    std::vector<std::string> names_;
    Tensor values_;
    FrameMeta meta_;
};

/// One (lookback, horizon) sample. The lookback's last row immediately
/// precedes the horizon's first row in the source frame.
struct WindowPair {
    Tensor lookback;  // L x N
    Tensor horizon;   // H x N
    std::size_t anchor_t = 0;
};

/// Sliding windows ordered by anchor; count = floor((T - L - H)/stride) + 1.
inline std::vector<WindowPair> make_windows(const SeriesFrame& frame, std::size_t lookback_len,
                                            std::size_t horizon_len, std::size_t stride = 1) {
    if (lookback_len < 1 || horizon_len < 1 || stride < 1)
        throw Error::input("make_windows: lookback, horizon and stride must be >= 1");
    const std::size_t total = frame.length();
    const std::size_t n = frame.n_series();
    if (total < lookback_len + horizon_len) {
        throw Error::input("make_windows: series length " + std::to_string(total) +
                           " too short for lookback " + std::to_string(lookback_len) +
                           " + horizon " + std::to_string(horizon_len));
    }
    std::vector<WindowPair> out;
    out.reserve((total - lookback_len - horizon_len) / stride + 1);
    for (std::size_t t = lookback_len; t + horizon_len <= total; t += stride) {
        Tensor lb = Tensor::zeros({lookback_len, n});
        Tensor hz = Tensor::zeros({horizon_len, n});
        for (std::size_t r = 0; r < lookback_len; ++r)
            for (std::size_t i = 0; i < n; ++i) lb(r, i) = frame.at(t - lookback_len + r, i);
        for (std::size_t r = 0; r < horizon_len; ++r)
            for (std::size_t i = 0; i < n; ++i) hz(r, i) = frame.at(t + r, i);
        out.push_back(WindowPair{std::move(lb), std::move(hz), t});
    }
    return out;
}

/// Three non-negative ratio weights for a chronological split.
struct SplitSpec {
    double train = 7.0;
    double val = 1.0;
    double test = 2.0;

    void validate() const {
        if (train < 0 || val < 0 || test < 0 || train + val + test <= 0)
            throw Error::input("split: ratios must be non-negative with a positive total");
    }

    /// Parse "7:1:2".
    static SplitSpec parse(const std::string& text) {
        SplitSpec s{};
        double parts[3];
        std::size_t pos = 0;
        for (int k = 0; k < 3; ++k) {
            std::size_t next = k < 2 ? text.find(':', pos) : text.size();
            if (next == std::string::npos)
                throw Error::input("split: expected train:val:test, got '" + text + "'");
            try {
                std::size_t used = 0;
                parts[k] = std::stod(text.substr(pos, next - pos), &used);
                if (used != next - pos) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw Error::input("split: bad ratio in '" + text + "'");
            }
            pos = next + 1;
        }
        s.train = parts[0];
        s.val = parts[1];
        s.test = parts[2];
        s.validate();
        return s;
    }
};

struct SplitFrames {
    SeriesFrame train;
    SeriesFrame val;
    SeriesFrame test;
};

/// Contiguous, ordered, non-overlapping partitions with lengths proportional
/// to the ratios; remainder rows go to train.
inline SplitFrames chrono_split(const SeriesFrame& frame, const SplitSpec& spec) {
    spec.validate();
    const std::size_t total = frame.length();
    const double sum = spec.train + spec.val + spec.test;
    const auto val_len = static_cast<std::size_t>(total * (spec.val / sum));
    const auto test_len = static_cast<std::size_t>(total * (spec.test / sum));
    const std::size_t train_len = total - val_len - test_len;
    return SplitFrames{
        frame.slice_rows(0, train_len),
        frame.slice_rows(train_len, train_len + val_len),
        frame.slice_rows(train_len + val_len, total),
    };
}

}  // namespace dishts
