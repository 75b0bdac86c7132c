#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dishts/error.hpp"

namespace dishts {

using Shape = std::vector<std::size_t>;

/// Floor applied to every scaling/std quantity before it is used as a
/// divisor, and to the sqrt gradient at zero.
inline constexpr double kEpsFloor = 1e-8;

inline std::size_t shape_numel(const Shape& s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return n;
}

inline std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << 'x';
        os << s[i];
    }
    os << ']';
    return os.str();
}

/// Dense row-major tensor of 64-bit floats. Rank 0 is a scalar.
class Tensor {
public:
    Tensor() : shape_(), data_(1, 0.0) {}

    Tensor(Shape shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (shape_numel(shape_) != data_.size()) {
            throw Error::internal("tensor: shape " + shape_str(shape_) + " does not match " +
                                  std::to_string(data_.size()) + " values");
        }
    }

    static Tensor scalar(double v) { return Tensor(Shape{}, {v}); }

    static Tensor zeros(Shape shape) {
        std::size_t n = shape_numel(shape);
        return Tensor(std::move(shape), std::vector<double>(n, 0.0));
    }

    static Tensor full(Shape shape, double v) {
        std::size_t n = shape_numel(shape);
        return Tensor(std::move(shape), std::vector<double>(n, v));
    }

    static Tensor zeros_like(const Tensor& t) { return zeros(t.shape()); }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t numel() const noexcept { return data_.size(); }
    bool is_scalar() const noexcept { return data_.size() == 1; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    std::vector<double>& vec() noexcept { return data_; }
    const std::vector<double>& vec() const noexcept { return data_; }

    double& at(std::size_t i) { return data_[i]; }
    double at(std::size_t i) const { return data_[i]; }

    /// Rank-2 accessors.
    std::size_t rows() const { return shape_.empty() ? 1 : shape_[0]; }
    std::size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void check_finite(const std::string& what) const {
        if (!all_finite()) throw Error::numeric(what + ": non-finite value in result");
    }

private:
    Shape shape_;
    std::vector<double> data_;
};

/// Column j of a rank-2 tensor as a rank-1 tensor.
inline Tensor column(const Tensor& m, std::size_t j) {
    if (m.rank() != 2 || j >= m.cols()) {
        throw Error::internal("column: need rank-2 tensor with column " + std::to_string(j) +
                              ", got " + shape_str(m.shape()));
    }
    std::vector<double> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out[r] = m(r, j);
    return Tensor(Shape{m.rows()}, std::move(out));
}

}  // namespace dishts
