#pragma once

#include <cstdint>
#include <vector>

#include "triofm/matrix.hpp"

namespace triofm {

/// Upper-triangular part including the diagonal: entry (i,j) kept for i <= j.
Matrix triu(const Matrix& m);

struct SymEigResult {
    std::vector<double> eigenvalues;  // ascending
    Matrix vectors;                   // orthonormal columns
};

/// Eigendecomposition of a small dense symmetric matrix by cyclic Jacobi
/// sweeps. `max_dim` guards against misuse on large inputs (tests and
/// reference computations may raise it).
SymEigResult sym_eig(const Matrix& m, int max_dim = 64);

struct GenEigResult {
    std::vector<double> eigenvalues;  // ascending, S Q = B Q diag(eigenvalues)
    Matrix vectors;                   // B-orthonormal: Q^T B Q = I
};

/// Generalized symmetric problem S Q = B Q L for SPD B, via Cholesky reduction
/// to a standard problem. Throws SingularError when B is numerically singular
/// (pivot below 1e-14 * ||B||).
GenEigResult gen_eig(const Matrix& s, const Matrix& b, int max_dim = 64);

/// Lower Cholesky factor of an SPD matrix; throws SingularError on breakdown.
Matrix cholesky_lower(const Matrix& b, double rel_tol = 1e-14);

/// Haar-distributed orthogonal matrix: QR of an n-by-n standard Gaussian
/// matrix with the R diagonal sign-fixed to positive. Deterministic in seed.
Matrix random_orthogonal(int n, std::uint64_t seed);

}  // namespace triofm
