#pragma once

#include <vector>

#include "triofm/matrix.hpp"

namespace triofm {

/// Known eigenpairs of a test operator: eigenvalues ascending, orthonormal
/// eigenvectors, and indices grouped by (numerically) equal eigenvalue so the
/// metrics can align within degenerate invariant subspaces.
struct ReferenceEigen {
    std::vector<double> eigenvalues;          // ascending, length p_ref
    Matrix vectors;                           // n x p_ref, orthonormal columns
    std::vector<std::vector<int>> degeneracy_groups;

    int count() const { return static_cast<int>(eigenvalues.size()); }

    /// Builds the degeneracy groups with the given absolute gap tolerance
    /// (callers typically pass 1e-10 * ||A||).
    static ReferenceEigen create(std::vector<double> eigenvalues, Matrix vectors,
                                 double group_tol);
};

}  // namespace triofm
