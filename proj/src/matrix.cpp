#include "triofm/matrix.hpp"

#include <cmath>

namespace triofm {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DimensionError("matmul: inner dimensions differ");
    Matrix c(a.rows, b.cols);
    for (int j = 0; j < b.cols; ++j) {
        double* cj = c.col(j);
        for (int k = 0; k < a.cols; ++k) {
            const double bkj = b(k, j);
            if (bkj == 0.0) continue;
            axpy(bkj, a.col(k), cj, a.rows);
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) throw DimensionError("matmul_tn: row counts differ");
    Matrix c(a.cols, b.cols);
    for (int j = 0; j < b.cols; ++j)
        for (int i = 0; i < a.cols; ++i) c(i, j) = dot(a.col(i), b.col(j), a.rows);
    return c;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (int j = 0; j < m.cols; ++j)
        for (int i = 0; i < m.rows; ++i) t(j, i) = m(i, j);
    return t;
}

bool all_finite(const Matrix& m) {
    for (double v : m.data)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace triofm
