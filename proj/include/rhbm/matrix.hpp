#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace rhbm {

// Dense square matrix, row-major.
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}

    double at(std::size_t i, std::size_t j) const { return data[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return data[i * n + j]; }

    double total() const {
        double s = 0.0;
        for (double v : data) s += v;
        return s;
    }

    bool symmetric(double tol = 0.0) const {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(at(i, j) - at(j, i)) > tol) return false;
        return true;
    }
};

} // namespace rhbm
