#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dishts/error.hpp"
#include "dishts/kvtext.hpp"
#include "dishts/tape.hpp"

namespace dishts {

/// Plain-text parameter checkpoint. Values are written as C99 hexfloats so
/// save -> load -> save round-trips bit-exactly.
///
///   dishts-checkpoint 1
///   meta <key> <value...>
///   tensor <name> <rank> <dim...>
///   <hexfloat values, one line>
///   end
struct Checkpoint {
    std::map<std::string, std::string> meta;
    std::vector<std::pair<std::string, Tensor>> tensors;
};

inline void save_checkpoint(const std::string& path, const ParamStore& store,
                            const std::map<std::string, std::string>& meta) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error::input("checkpoint: cannot write '" + path + "'");
    out << "dishts-checkpoint 1\n";
    for (const auto& [key, value] : meta) out << "meta " << key << ' ' << value << '\n';
    char buf[40];
    for (std::size_t i = 0; i < store.size(); ++i) {
        const Tensor& t = store.value(i);
        out << "tensor " << store.name(i) << ' ' << t.rank();
        for (std::size_t d : t.shape()) out << ' ' << d;
        out << '\n';
        for (std::size_t k = 0; k < t.numel(); ++k) {
            std::snprintf(buf, sizeof(buf), "%a", t.at(k));
            out << (k ? " " : "") << buf;
        }
        out << '\n';
    }
    out << "end\n";
    if (!out) throw Error::input("checkpoint: write to '" + path + "' failed");
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error::input("checkpoint: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "dishts-checkpoint 1")
        throw Error::input("checkpoint: '" + path + "' has an unknown header");

    Checkpoint ckpt;
    bool saw_end = false;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line == "end") {
            saw_end = true;
            break;
        }
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        if (tag == "meta") {
            std::string key, value;
            fields >> key;
            std::getline(fields, value);
            ckpt.meta[key] = detail::trim(value);
        } else if (tag == "tensor") {
            std::string name;
            std::size_t rank = 0;
            fields >> name >> rank;
            Shape shape(rank);
            for (std::size_t d = 0; d < rank; ++d) fields >> shape[d];
            if (!fields) throw Error::input("checkpoint: bad tensor header '" + line + "'");
            std::string values_line;
            if (!std::getline(in, values_line))
                throw Error::input("checkpoint: missing values for tensor '" + name + "'");
            std::vector<double> values;
            values.reserve(shape_numel(shape));
            const char* cursor = values_line.c_str();
            char* next = nullptr;
            for (std::size_t k = 0; k < shape_numel(shape); ++k) {
                double v = std::strtod(cursor, &next);
                if (next == cursor)
                    throw Error::input("checkpoint: tensor '" + name + "' has too few values");
                values.push_back(v);
                cursor = next;
            }
            ckpt.tensors.emplace_back(name, Tensor(std::move(shape), std::move(values)));
        } else {
            throw Error::input("checkpoint: unknown line '" + line + "'");
        }
    }
    if (!saw_end) throw Error::input("checkpoint: '" + path + "' is truncated");
    return ckpt;
}

/// Copy checkpoint tensors into a store built from the same configuration.
/// Name-set and shape mismatches are incompatibility errors.
inline void apply_checkpoint(ParamStore& store, const Checkpoint& ckpt) {
    if (ckpt.tensors.size() != store.size())
        throw Error::input("checkpoint incompatible: has " + std::to_string(ckpt.tensors.size()) +
                           " tensors, model expects " + std::to_string(store.size()));
    std::map<std::string, const Tensor*> by_name;
    for (const auto& [name, tensor] : ckpt.tensors) by_name[name] = &tensor;
    for (std::size_t i = 0; i < store.size(); ++i) {
        auto it = by_name.find(store.name(i));
        if (it == by_name.end())
            throw Error::input("checkpoint incompatible: missing tensor '" + store.name(i) + "'");
        if (!it->second->same_shape(store.value(i)))
            throw Error::input("checkpoint incompatible: tensor '" + store.name(i) + "' is " +
                               shape_str(it->second->shape()) + ", model expects " +
                               shape_str(store.value(i).shape()));
        store.value(i) = *it->second;
    }
}

}  // namespace dishts
