#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dishts/error.hpp"
#include "dishts/kvtext.hpp"
#include "dishts/rng.hpp"
#include "dishts/series.hpp"

namespace dishts {

/// One regime of the piecewise schedule: x_t = level + scale * z_t with
/// z_t = ar * z_{t-1} + noise * eps_t.
struct SyntheticSegment {
    double level = 0.0;
    double scale = 1.0;
    double ar = 0.0;
    std::size_t len = 0;
};

struct SyntheticSpec {
    std::size_t length = 0;
    std::size_t n_series = 1;
    std::uint64_t seed = 0;
    double noise = 1.0;
    std::vector<SyntheticSegment> segments;

    void validate() const {
        if (segments.empty()) throw Error::input("synthetic: empty segment schedule");
        if (length == 0 || n_series == 0)
            throw Error::input("synthetic: length and series count must be >= 1");
        if (noise < 0) throw Error::input("synthetic: noise must be >= 0");
        std::size_t total = 0;
        for (const auto& s : segments) {
            if (s.len == 0) throw Error::input("synthetic: segment with zero length");
            if (std::fabs(s.ar) >= 1.0)
                throw Error::input("synthetic: AR coefficient must satisfy |ar| < 1");
            total += s.len;
        }
        if (total != length)
            throw Error::input("synthetic: segment lengths sum to " + std::to_string(total) +
                               ", expected " + std::to_string(length));
    }
};

/// Deterministic per (spec, seed). The AR state continues across segment
/// boundaries; level and scale switch instantly, which is what creates the
/// ground-truth change points recorded in the frame meta.
inline SeriesFrame gen_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_series;
    Rng rng(spec.seed);

    Tensor values = Tensor::zeros({spec.length, n});
    std::vector<double> state(n);
    const double ar0 = spec.segments.front().ar;
    const double stat_std = spec.noise / std::sqrt(1.0 - ar0 * ar0);
    for (std::size_t i = 0; i < n; ++i) state[i] = stat_std * rng.normal();

    FrameMeta meta;
    meta.source = "<synthetic>";
    meta.freq_label = "synthetic";

    std::size_t t = 0;
    for (std::size_t s = 0; s < spec.segments.size(); ++s) {
        const SyntheticSegment& seg = spec.segments[s];
        if (s > 0) meta.segment_bounds.push_back(t);
        for (std::size_t k = 0; k < seg.len; ++k, ++t) {
            for (std::size_t i = 0; i < n; ++i) {
                values(t, i) = seg.level + seg.scale * state[i];
                state[i] = seg.ar * state[i] + spec.noise * rng.normal();
            }
        }
    }

    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
    return SeriesFrame(std::move(names), std::move(values), std::move(meta));
}

/// Plain-text spec: `key = value` lines for T, N, seed, noise, plus one
/// `segment level=.. scale=.. ar=.. len=..` line per regime. '#' starts a
/// comment.
inline SyntheticSpec parse_synthetic_spec(std::istream& in, const std::string& origin) {
    SyntheticSpec spec;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(line_no);

        if (line.rfind("segment", 0) == 0) {
            SyntheticSegment seg;
            std::istringstream fields(line.substr(7));
            std::string tok;
            while (fields >> tok) {
                std::string key, value;
                if (!detail::parse_kv(tok, key, value))
                    throw Error::input(where + ": bad segment field '" + tok + "'");
                if (key == "level") seg.level = detail::to_double(value, where);
                else if (key == "scale") seg.scale = detail::to_double(value, where);
                else if (key == "ar") seg.ar = detail::to_double(value, where);
                else if (key == "len") seg.len = detail::to_u64(value, where);
                else throw Error::input(where + ": unknown segment field '" + key + "'");
            }
            spec.segments.push_back(seg);
            continue;
        }

        std::string key, value;
        if (!detail::parse_kv(line, key, value))
            throw Error::input(where + ": expected 'key = value' or a segment line");
        if (key == "T") spec.length = detail::to_u64(value, where);
        else if (key == "N") spec.n_series = detail::to_u64(value, where);
        else if (key == "seed") spec.seed = detail::to_u64(value, where);
        else if (key == "noise") spec.noise = detail::to_double(value, where);
        else throw Error::input(where + ": unknown key '" + key + "'");
    }
    spec.validate();
    return spec;
}

inline SyntheticSpec parse_synthetic_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error::input("synthetic: cannot open spec '" + path + "'");
    return parse_synthetic_spec(in, path);
}

}  // namespace dishts
