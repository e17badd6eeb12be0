#pragma once

#include "triofm/matrix.hpp"
#include "triofm/operator.hpp"

namespace triofm {

enum class Objective { kObj1, kObj2 };

/// One of the four direction fields: the plain block gradient of either
/// objective, or its triangularized variant where the p-by-p Gram factors are
/// replaced by their upper-triangular parts so column i never sees columns
/// after it.
struct DirectionKind {
    Objective objective = Objective::kObj1;
    bool triangularized = true;
};

/// trace(2 X^T A X + X^T X X^T X) -- the residual objective in trace form
/// (differs from the squared Frobenius form by the constant ||A||_F^2 term).
double eval_obj1(const SymmetricOperator& a, const Matrix& x);

/// trace((2I - X^T X) X^T A X). Meaningful as a minimization target only for
/// negative definite A; see orbital_objective_warning below.
double eval_obj2(const SymmetricOperator& a, const Matrix& x);

/// 4AX + 4X X^T X. Exactly one operator application.
Matrix grad_obj1(const SymmetricOperator& a, const Matrix& x);

/// 4AX - 2X X^T A X - 2A X X^T X. Exactly one operator application.
Matrix grad_obj2(const SymmetricOperator& a, const Matrix& x);

/// g1(X) = AX + X triu(X^T X). Column i depends only on columns 1..i.
Matrix tri_direction_obj1(const SymmetricOperator& a, const Matrix& x);

/// g2(X) = 2AX - AX triu(X^T X) - X triu(X^T A X). Column i depends only on
/// columns 1..i.
Matrix tri_direction_obj2(const SymmetricOperator& a, const Matrix& x);

/// Direction field evaluated from a precomputed product AX (the solver keeps
/// AX current and never pays a second operator application per step). For the
/// non-triangularized kinds this yields the gradient scaled by 1/4 (objective
/// one) or 1/2 (objective two), the common factor being absorbed into the
/// stepsize. Columns with locked[i] set are left untouched in `out`.
void direction_from_products(DirectionKind kind, const Matrix& x, const Matrix& ax,
                             const std::vector<bool>* locked, Matrix& out);

/// True when any diagonal Ritz-style value x_i^T A x_i / x_i^T x_i is
/// positive, in which case the orbital objective is unbounded from below and
/// the caller should warn.
bool detect_positive_ritz(const Matrix& x, const Matrix& ax);

}  // namespace triofm
