#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace rvc {

// Unit-interval arguments are pulled away from the boundary before any
// copula evaluation; densities and quantiles diverge at 0 and 1.
inline constexpr double kUnitEps = 1e-10;

// Per-factor floor for log-density terms.
inline const double kLogFloor = std::log(1e-300);

inline double clamp_unit(double u) {
    if (u < kUnitEps) return kUnitEps;
    if (u > 1.0 - kUnitEps) return 1.0 - kUnitEps;
    return u;
}

// Column-major matrix; columns are variables, rows are observations.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const double> col(std::size_t c) const {
        return {data_.data() + c * rows_, rows_};
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

inline void require_finite(std::span<const double> xs, const std::string& what) {
    for (double x : xs)
        if (!std::isfinite(x)) fail(ErrorKind::invalid_argument, what + ": non-finite value");
}

} // namespace rvc
