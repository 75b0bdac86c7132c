#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dishts/error.hpp"
#include "dishts/kvtext.hpp"
#include "dishts/series.hpp"

namespace dishts {

struct CsvConfig {
    /// Treat the first column as a timestamp and drop it.
    bool drop_first_column = false;
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out = split(line, ',');
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
    return out;
}

}  // namespace detail

/// Read a comma-separated file with a header row into a SeriesFrame. Values
/// are parsed as 64-bit floats; nothing is rescaled or normalized. Line
/// numbers in errors are 1-based and count the header.
inline SeriesFrame load_csv(const std::string& path, const CsvConfig& cfg = {}) {
    std::ifstream in(path);
    if (!in) throw Error::input("csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error::input("csv: '" + path + "' is empty");
    std::vector<std::string> header = detail::split_fields(line);
    const std::size_t skip = cfg.drop_first_column ? 1 : 0;
    if (header.size() <= skip)
        throw Error::input("csv: '" + path + "' has no value columns after the header");

    std::vector<std::string> names;
    for (std::size_t c = skip; c < header.size(); ++c) names.push_back(detail::trim(header[c]));

    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> fields = detail::split_fields(line);
        if (fields.size() != header.size()) {
            throw Error::input("csv: line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
        }
        for (std::size_t c = skip; c < fields.size(); ++c) {
            const std::string cell = detail::trim(fields[c]);
            char* end = nullptr;
            double v = cell.empty() ? 0.0 : std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
                throw Error::input("csv: line " + std::to_string(line_no) + ", column '" +
                                   names[c - skip] + "' (index " + std::to_string(c) +
                                   "): unparseable value '" + cell + "'");
            }
            data.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw Error::input("csv: '" + path + "' has no data rows");

    Tensor values({rows, names.size()}, std::move(data));
    FrameMeta meta;
    meta.source = path;
    return SeriesFrame(std::move(names), std::move(values), std::move(meta));
}

/// Minimal CSV emitter; all output files carry a header row and use %.17g
/// so doubles round-trip.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw Error::input("csv: cannot write '" + path + "'");
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

private:
    std::ofstream out_;
};

}  // namespace dishts
