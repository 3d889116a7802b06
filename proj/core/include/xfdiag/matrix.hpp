#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace xfdiag {

// Dense row-major matrix of doubles. Kept deliberately minimal: the feature
// matrices and training sets in this project are plain rectangular blocks.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), values(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }
    std::span<double> row(std::size_t r) {
        return {values.data() + r * cols, cols};
    }

    void push_row(std::span<const double> v) {
        if (rows == 0 && cols == 0) cols = v.size();
        if (v.size() != cols) throw std::invalid_argument("push_row: width mismatch");
        values.insert(values.end(), v.begin(), v.end());
        ++rows;
    }

    // row-subset copy
    Matrix take(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), cols);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto src = row(idx[i]);
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }
};

}  // namespace xfdiag
