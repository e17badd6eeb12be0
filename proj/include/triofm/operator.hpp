#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "triofm/block_vector.hpp"
#include "triofm/matrix.hpp"

namespace triofm {

enum class OperatorKind { kDense, kSparseCsr, kDiagonal, kProcedural };

/// Symmetric linear map in one of four representations. Instances are
/// immutable after construction and safe to share read-only across threads.
class SymmetricOperator {
  public:
    SymmetricOperator() = default;  // inert zero-dimensional placeholder

    static SymmetricOperator dense(Matrix a);
    static SymmetricOperator diagonal(std::vector<double> d);
    static SymmetricOperator csr(int n, std::vector<int> row_ptr, std::vector<int> col_idx,
                                 std::vector<double> values);
    static SymmetricOperator procedural(int n,
                                        std::function<void(const double*, double*)> matvec);

    int dimension() const { return n_; }
    OperatorKind kind() const { return kind_; }

    std::optional<double> norm_estimate() const { return norm_estimate_; }
    void set_norm_estimate(double rho) { norm_estimate_ = rho; }

    /// y = A x for a single column.
    void apply_column(const double* x, double* y) const;

    /// Dense materialization (for oracles and file export). Throws for
    /// procedural operators above the requested size guard.
    Matrix to_dense(int max_dim = 4096) const;

    const Matrix& dense_data() const { return dense_; }
    const std::vector<double>& diagonal_data() const { return diag_; }
    const std::vector<int>& csr_row_ptr() const { return row_ptr_; }
    const std::vector<int>& csr_col_idx() const { return col_idx_; }
    const std::vector<double>& csr_values() const { return values_; }

  private:
    int n_ = 0;
    OperatorKind kind_ = OperatorKind::kDense;
    std::optional<double> norm_estimate_;
    Matrix dense_;
    std::vector<double> diag_;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> values_;
    std::function<void(const double*, double*)> matvec_;
};

/// AX column by column. Bumps x.column_access_count by the number of columns
/// actually multiplied; when skip_locked is set, locked columns are skipped
/// and their output columns are left zero.
Matrix apply_operator(const SymmetricOperator& a, BlockVector& x, bool skip_locked = false);

/// Same kernel on a bare matrix; returns the number of columns multiplied.
long apply_block(const SymmetricOperator& a, const Matrix& x, const std::vector<bool>* locked,
                 Matrix& out);

/// ||A||_2 estimate by a fixed number of power iterations with a fixed seed.
double estimate_norm(const SymmetricOperator& a, int iterations = 30,
                     std::uint64_t seed = 0x6f70726d);

}  // namespace triofm
