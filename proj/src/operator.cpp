#include "triofm/operator.hpp"

#include <cmath>
#include <thread>

#include "triofm/rng.hpp"

namespace triofm {

SymmetricOperator SymmetricOperator::dense(Matrix a) {
    if (a.rows != a.cols) throw DimensionError("dense operator must be square");
    SymmetricOperator op;
    op.n_ = a.rows;
    op.kind_ = OperatorKind::kDense;
    op.dense_ = std::move(a);
    return op;
}

SymmetricOperator SymmetricOperator::diagonal(std::vector<double> d) {
    SymmetricOperator op;
    op.n_ = static_cast<int>(d.size());
    op.kind_ = OperatorKind::kDiagonal;
    op.diag_ = std::move(d);
    double rho = 0.0;
    for (double v : op.diag_) rho = std::max(rho, std::fabs(v));
    op.norm_estimate_ = rho;
    return op;
}

SymmetricOperator SymmetricOperator::csr(int n, std::vector<int> row_ptr,
                                         std::vector<int> col_idx, std::vector<double> values) {
    if (static_cast<int>(row_ptr.size()) != n + 1)
        throw DimensionError("csr: row_ptr must have n+1 entries");
    if (col_idx.size() != values.size()) throw DimensionError("csr: col_idx/values size mismatch");
    SymmetricOperator op;
    op.n_ = n;
    op.kind_ = OperatorKind::kSparseCsr;
    op.row_ptr_ = std::move(row_ptr);
    op.col_idx_ = std::move(col_idx);
    op.values_ = std::move(values);
    return op;
}

SymmetricOperator SymmetricOperator::procedural(int n,
                                                std::function<void(const double*, double*)> mv) {
    SymmetricOperator op;
    op.n_ = n;
    op.kind_ = OperatorKind::kProcedural;
    op.matvec_ = std::move(mv);
    return op;
}

void SymmetricOperator::apply_column(const double* x, double* y) const {
    switch (kind_) {
        case OperatorKind::kDense: {
            for (int i = 0; i < n_; ++i) y[i] = 0.0;
            for (int j = 0; j < n_; ++j) {
                const double xj = x[j];
                if (xj == 0.0) continue;
                axpy(xj, dense_.col(j), y, n_);
            }
            break;
        }
        case OperatorKind::kDiagonal:
            for (int i = 0; i < n_; ++i) y[i] = diag_[static_cast<std::size_t>(i)] * x[i];
            break;
        case OperatorKind::kSparseCsr:
            for (int i = 0; i < n_; ++i) {
                double s = 0.0;
                for (int k = row_ptr_[static_cast<std::size_t>(i)];
                     k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
                    s += values_[static_cast<std::size_t>(k)] *
                         x[col_idx_[static_cast<std::size_t>(k)]];
                y[i] = s;
            }
            break;
        case OperatorKind::kProcedural:
            matvec_(x, y);
            break;
    }
}

Matrix SymmetricOperator::to_dense(int max_dim) const {
    if (n_ > max_dim) throw DimensionError("to_dense: operator larger than requested guard");
    if (kind_ == OperatorKind::kDense) return dense_;
    Matrix a(n_, n_);
    std::vector<double> e(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
        e[static_cast<std::size_t>(j)] = 1.0;
        apply_column(e.data(), a.col(j));
        e[static_cast<std::size_t>(j)] = 0.0;
    }
    return a;
}

namespace {

// Columns are independent, so a static partition over threads gives the same
// bits as the serial loop.
void apply_columns(const SymmetricOperator& a, const Matrix& x, const std::vector<bool>* locked,
                   Matrix& out, const std::vector<int>& cols) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t want = cols.size();
    if (hw <= 1 || want < 4 || a.dimension() < 1024) {
        for (int j : cols) a.apply_column(x.col(j), out.col(j));
        return;
    }
    const unsigned threads = std::min<unsigned>(hw, static_cast<unsigned>(want));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t k = t; k < want; k += threads) {
                int j = cols[k];
                a.apply_column(x.col(j), out.col(j));
            }
        });
    }
    for (auto& th : pool) th.join();
    (void)locked;
}

}  // namespace

long apply_block(const SymmetricOperator& a, const Matrix& x, const std::vector<bool>* locked,
                 Matrix& out) {
    if (a.dimension() != x.rows)
        throw DimensionError("apply: operator dimension " + std::to_string(a.dimension()) +
                             " does not match block rows " + std::to_string(x.rows));
    if (out.rows != x.rows || out.cols != x.cols) out = Matrix(x.rows, x.cols);
    std::vector<int> cols;
    cols.reserve(static_cast<std::size_t>(x.cols));
    for (int j = 0; j < x.cols; ++j) {
        if (locked && (*locked)[static_cast<std::size_t>(j)]) {
            std::fill(out.col(j), out.col(j) + out.rows, 0.0);
            continue;
        }
        cols.push_back(j);
    }
    apply_columns(a, x, locked, out, cols);
    return static_cast<long>(cols.size());
}

Matrix apply_operator(const SymmetricOperator& a, BlockVector& x, bool skip_locked) {
    Matrix out(x.n(), x.p());
    const long multiplied = apply_block(a, x.values, skip_locked ? &x.locked : nullptr, out);
    x.column_access_count += multiplied;
    return out;
}

double estimate_norm(const SymmetricOperator& a, int iterations, std::uint64_t seed) {
    const int n = a.dimension();
    Rng rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (auto& vi : v) vi = rng.next_gaussian();
    double nv = norm2(v.data(), n);
    for (auto& vi : v) vi /= nv;
    double rho = 0.0;
    for (int it = 0; it < iterations; ++it) {
        a.apply_column(v.data(), w.data());
        rho = norm2(w.data(), n);
        if (rho == 0.0) return 0.0;
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / rho;
    }
    return rho;
}

}  // namespace triofm
