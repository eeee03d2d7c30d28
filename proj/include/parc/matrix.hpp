#pragma once
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "parc/errors.hpp"

namespace parc {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    const double* row(std::size_t i) const { return data.data() + i * cols; }
    double* row(std::size_t i) { return data.data() + i * cols; }

    std::size_t size() const { return data.size(); }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline bool all_finite(const Matrix& m) { return all_finite(m.data); }

/// y = W x + b. Checks shapes, names the mismatch.
inline void affine(const Matrix& w, const std::vector<double>& b, const std::vector<double>& x,
                   std::vector<double>& y, const std::string& who) {
    if (w.cols != x.size())
        throw ShapeError(who + ": weight expects input of length " + std::to_string(w.cols) +
                         ", got " + std::to_string(x.size()));
    if (w.rows != b.size())
        throw ShapeError(who + ": bias length " + std::to_string(b.size()) + " != weight rows " +
                         std::to_string(w.rows));
    y.resize(w.rows);
    for (std::size_t i = 0; i < w.rows; ++i) {
        const double* wr = w.row(i);
        double acc = b[i];
        for (std::size_t j = 0; j < w.cols; ++j) acc += wr[j] * x[j];
        y[i] = acc;
    }
}

} // namespace parc
