#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "phasereg/errors.hpp"

namespace phasereg {

using Complex = std::complex<double>;

// Row-major dense 2D array. Row index is the slow (y2 / angle) axis.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        if (values_.size() != rows_ * cols_)
            throw InputError("matrix: value count does not match shape");
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

    std::vector<T>& values() { return values_; }
    const std::vector<T>& values() const { return values_; }
    T* data() { return values_.data(); }
    const T* data() const { return values_.data(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> values_;
};

using Array2D = Matrix<double>;
using ComplexArray2D = Matrix<Complex>;

} // namespace phasereg
