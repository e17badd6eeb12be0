#include "triofm/directions.hpp"

#include <vector>

namespace triofm {

namespace {

Matrix apply_dense_block(const SymmetricOperator& a, const Matrix& x) {
    Matrix ax(x.rows, x.cols);
    apply_block(a, x, nullptr, ax);
    return ax;
}

bool is_locked(const std::vector<bool>* locked, int j) {
    return locked && (*locked)[static_cast<std::size_t>(j)];
}

}  // namespace

double eval_obj1(const SymmetricOperator& a, const Matrix& x) {
    const Matrix ax = apply_dense_block(a, x);
    const Matrix s = matmul_tn(x, x);
    double value = 0.0;
    for (int i = 0; i < x.cols; ++i) value += 2.0 * dot(x.col(i), ax.col(i), x.rows);
    // trace((X^T X)^2) = sum of squares of the symmetric Gram matrix.
    for (double v : s.data) value += v * v;
    return value;
}

double eval_obj2(const SymmetricOperator& a, const Matrix& x) {
    const Matrix ax = apply_dense_block(a, x);
    const Matrix s = matmul_tn(x, x);
    const Matrix sa = matmul_tn(x, ax);
    double value = 0.0;
    for (int i = 0; i < x.cols; ++i) value += 2.0 * sa(i, i);
    for (int i = 0; i < x.cols; ++i)
        for (int j = 0; j < x.cols; ++j) value -= s(i, j) * sa(j, i);
    return value;
}

void direction_from_products(DirectionKind kind, const Matrix& x, const Matrix& ax,
                             const std::vector<bool>* locked, Matrix& out) {
    const int n = x.rows;
    const int p = x.cols;
    if (ax.rows != n || ax.cols != p) throw DimensionError("direction: AX shape mismatch");
    if (out.rows != n || out.cols != p) out = Matrix(n, p);

    if (kind.objective == Objective::kObj1) {
        // Column i: (AX)_i + sum_{j<=J} x_j (x_j^T x_i), J = i (triangularized)
        // or J = p (full gradient / 4).
        for (int i = 0; i < p; ++i) {
            if (is_locked(locked, i)) continue;
            double* gi = out.col(i);
            std::copy(ax.col(i), ax.col(i) + n, gi);
            const int last = kind.triangularized ? i : p - 1;
            for (int j = 0; j <= last; ++j) {
                const double sji = dot(x.col(j), x.col(i), n);
                axpy(sji, x.col(j), gi, n);
            }
        }
    } else {
        // Column i: 2(AX)_i - sum_{j<=J} (AX)_j (x_j^T x_i) + x_j (x_j^T (AX)_i).
        for (int i = 0; i < p; ++i) {
            if (is_locked(locked, i)) continue;
            double* gi = out.col(i);
            for (int r = 0; r < n; ++r) gi[r] = 2.0 * ax.col(i)[r];
            const int last = kind.triangularized ? i : p - 1;
            for (int j = 0; j <= last; ++j) {
                const double sji = dot(x.col(j), x.col(i), n);
                const double saji = dot(x.col(j), ax.col(i), n);
                axpy(-sji, ax.col(j), gi, n);
                axpy(-saji, x.col(j), gi, n);
            }
        }
    }
}

Matrix grad_obj1(const SymmetricOperator& a, const Matrix& x) {
    const Matrix ax = apply_dense_block(a, x);
    Matrix g(x.rows, x.cols);
    direction_from_products({Objective::kObj1, false}, x, ax, nullptr, g);
    for (double& v : g.data) v *= 4.0;
    return g;
}

Matrix grad_obj2(const SymmetricOperator& a, const Matrix& x) {
    const Matrix ax = apply_dense_block(a, x);
    Matrix g(x.rows, x.cols);
    direction_from_products({Objective::kObj2, false}, x, ax, nullptr, g);
    for (double& v : g.data) v *= 2.0;
    return g;
}

Matrix tri_direction_obj1(const SymmetricOperator& a, const Matrix& x) {
    const Matrix ax = apply_dense_block(a, x);
    Matrix g(x.rows, x.cols);
    direction_from_products({Objective::kObj1, true}, x, ax, nullptr, g);
    return g;
}

Matrix tri_direction_obj2(const SymmetricOperator& a, const Matrix& x) {
    const Matrix ax = apply_dense_block(a, x);
    Matrix g(x.rows, x.cols);
    direction_from_products({Objective::kObj2, true}, x, ax, nullptr, g);
    return g;
}

bool detect_positive_ritz(const Matrix& x, const Matrix& ax) {
    for (int i = 0; i < x.cols; ++i) {
        const double xx = dot(x.col(i), x.col(i), x.rows);
        if (xx == 0.0) continue;
        if (dot(x.col(i), ax.col(i), x.rows) > 0.0) return true;
    }
    return false;
}

}  // namespace triofm
