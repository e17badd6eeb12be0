#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "triofm/types.hpp"

namespace triofm {

/// Dense column-major matrix. This is deliberately minimal: the solver needs
/// predictable, column-at-a-time arithmetic (column i of every kernel must be
/// computed from columns 1..i in a fixed order), so all heavy lifting is done
/// by explicit loops in the modules rather than by a BLAS with its own
/// blocking.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // column-major, rows*cols entries

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(j) * rows + i]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(j) * rows + i]; }

    double* col(int j) { return data.data() + static_cast<std::size_t>(j) * rows; }
    const double* col(int j) const { return data.data() + static_cast<std::size_t>(j) * rows; }

    void set_zero() { std::fill(data.begin(), data.end(), 0.0); }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline double dot(const double* x, const double* y, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const double* x, int n) { return std::sqrt(dot(x, x, n)); }

/// y += a*x
inline void axpy(double a, const double* x, double* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

inline double frobenius_norm(const Matrix& m) {
    return norm2(m.data.data(), static_cast<int>(m.data.size()));
}

/// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);

/// C = A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

bool all_finite(const Matrix& m);

}  // namespace triofm
