#pragma once

#include "triofm/directions.hpp"
#include "triofm/operator.hpp"
#include "triofm/reference.hpp"
#include "triofm/solver.hpp"

namespace triofm {

/// Relative distance min ||X - X*||_F / ||X*||_F over the set of global
/// minimizers of the triangularized scheme: column signs are optimized
/// independently, and inside each degenerate eigenvalue group the alignment
/// is an orthogonal Procrustes fit. The minimizer columns carry the scaling
/// sqrt(-lambda_i) for the residual objective and unit norm for the orbital
/// one.
double e_vec(const Matrix& x, const ReferenceEigen& ref, Objective objective);

/// |trace((X^T X)^{-1} X^T A X) - sum lambda_i| / |sum lambda_i|, the inverse
/// applied through the small generalized eigensolve. Throws SingularError for
/// rank-deficient X.
double e_val(const SymmetricOperator& a, const Matrix& x, const ReferenceEigen& ref);
double e_val_from_products(const Matrix& x, const Matrix& ax, const ReferenceEigen& ref);

/// Number of entries with |x| > threshold across all columns.
long nnz_thresholded(const Matrix& x, double threshold = 1e-5);

struct RateFit {
    double rate = 0.0;   // per-iteration error contraction factor
    int rows_used = 0;
    long first_iteration = 0;
    long last_iteration = 0;
};

/// Fits the local linear convergence factor of one column from its trace:
/// least-squares slope of log err against the iteration index over the
/// trailing monotonically decreasing run with err in [10*epsilon, 1e-4],
/// exponentiated to a per-iteration factor. Requires at least 20 usable rows.
RateFit fit_rate(const ConvergenceTrace& trace, int column, double epsilon);

}  // namespace triofm
