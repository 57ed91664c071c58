#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "hetpanel/core/error.hpp"

namespace hetpanel {

/// Dense row-major array of 64-bit floats. The workhorse value type for
/// node features, parameters and intermediate activations.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::int64_t> shape)
        : shape_(std::move(shape)), data_(numel_of(shape_), 0.0) {}

    Tensor(std::initializer_list<std::int64_t> shape)
        : Tensor(std::vector<std::int64_t>(shape)) {}

    static Tensor zeros(std::vector<std::int64_t> shape) { return Tensor(std::move(shape)); }

    static Tensor full(std::vector<std::int64_t> shape, double value) {
        Tensor t(std::move(shape));
        std::fill(t.data_.begin(), t.data_.end(), value);
        return t;
    }

    static Tensor from_values(std::vector<std::int64_t> shape, std::vector<double> values) {
        Tensor t;
        t.shape_ = std::move(shape);
        if (numel_of(t.shape_) != static_cast<std::int64_t>(values.size()))
            throw UsageError("Tensor::from_values: value count does not match shape");
        t.data_ = std::move(values);
        return t;
    }

    const std::vector<std::int64_t>& shape() const { return shape_; }
    std::int64_t dim(std::size_t i) const { return shape_.at(i); }
    std::size_t rank() const { return shape_.size(); }
    std::int64_t numel() const { return static_cast<std::int64_t>(data_.size()); }

    std::int64_t rows() const { return rank() >= 1 ? shape_[0] : 0; }
    std::int64_t cols() const { return rank() == 2 ? shape_[1] : (rank() == 1 ? 1 : 0); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

    double& at(std::int64_t r, std::int64_t c) { return data_[static_cast<std::size_t>(r * cols() + c)]; }
    double at(std::int64_t r, std::int64_t c) const { return data_[static_cast<std::size_t>(r * cols() + c)]; }

    double* row(std::int64_t r) { return data() + r * cols(); }
    const double* row(std::int64_t r) const { return data() + r * cols(); }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    /// Reinterpret the same storage under a new shape (numel must match).
    Tensor reshaped(std::vector<std::int64_t> shape) const {
        Tensor t;
        t.shape_ = std::move(shape);
        if (numel_of(t.shape_) != numel())
            throw UsageError("Tensor::reshaped: element count mismatch");
        t.data_ = data_;
        return t;
    }

    bool all_finite() const {
        for (const double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    std::string shape_str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < shape_.size(); ++i) {
            if (i) s += "x";
            s += std::to_string(shape_[i]);
        }
        return s + "]";
    }

private:
    static std::int64_t numel_of(const std::vector<std::int64_t>& shape) {
        std::int64_t n = 1;
        for (const auto d : shape) {
            if (d < 0) throw UsageError("Tensor: negative dimension");
            n *= d;
        }
        return shape.empty() ? 0 : n;
    }

    std::vector<std::int64_t> shape_;
    std::vector<double> data_;
};

}  // namespace hetpanel
