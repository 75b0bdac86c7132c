#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dishts/error.hpp"

namespace dishts::detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = text.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(text.substr(pos));
            break;
        }
        out.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

/// "key = value" or "key=value"; returns false when there is no '='.
inline bool parse_kv(const std::string& line, std::string& key, std::string& value) {
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) return false;
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    return !key.empty();
}

inline double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw Error::input(what + ": bad number '" + s + "'");
    }
}

inline std::uint64_t to_u64(const std::string& s, const std::string& what) {
    try {
        // stoull wraps negatives silently
        if (s.find('-') != std::string::npos) throw std::invalid_argument("");
        std::size_t used = 0;
        unsigned long long v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw Error::input(what + ": bad integer '" + s + "'");
    }
}

inline bool to_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw Error::input(what + ": bad boolean '" + s + "'");
}

}  // namespace dishts::detail
