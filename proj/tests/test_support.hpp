#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dishts/tape.hpp"

namespace testsup {

/// Central finite differences over every element of every ParamStore entry.
/// `loss` must rebuild its tape from the store on each call, so the oracle
/// stays independent of the reverse-mode path it checks.
struct FdReport {
    double max_rel_err = 0.0;
    std::string worst_param;
};

inline double rel_err(double analytic, double numeric) {
    double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-3});
    return std::fabs(analytic - numeric) / denom;
}

inline FdReport fd_check(dishts::ParamStore& store,
                         const std::function<double()>& loss,
                         double step = 1e-6) {
    FdReport rep;
    for (std::size_t p = 0; p < store.size(); ++p) {
        dishts::Tensor analytic = store.grad(p);
        for (std::size_t k = 0; k < analytic.numel(); ++k) {
            double saved = store.value(p).at(k);
            store.value(p).at(k) = saved + step;
            double up = loss();
            store.value(p).at(k) = saved - step;
            double down = loss();
            store.value(p).at(k) = saved;
            double numeric = (up - down) / (2.0 * step);
            double err = rel_err(analytic.at(k), numeric);
            if (err > rep.max_rel_err) {
                rep.max_rel_err = err;
                rep.worst_param = store.name(p) + "[" + std::to_string(k) + "]";
            }
        }
    }
    return rep;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

/// Fresh scratch directory under the build tree.
inline std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("dishts_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace testsup
