#pragma once

#include <optional>
#include <vector>

#include "triofm/directions.hpp"
#include "triofm/matrix.hpp"
#include "triofm/operator.hpp"

namespace triofm {

/// c3 a^3 + c2 a^2 + c1 a + c0. When produced by an exact linesearch the
/// leading coefficient is nonnegative (it is the leading coefficient of the
/// derivative of a quartic that grows at infinity).
struct CubicPoly {
    double c3 = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;

    double eval(double a) const { return ((c3 * a + c2) * a + c1) * a + c0; }
    double derivative(double a) const { return (3.0 * c3 * a + 2.0 * c2) * a + c1; }
    /// Antiderivative with zero constant term: the quartic the root selection
    /// rules compare candidates on.
    double antiderivative(double a) const {
        return (((c3 / 4.0) * a + c2 / 3.0) * a + c1 / 2.0) * a * a + c0 * a;
    }
    double coefficient_scale() const;
    bool is_zero() const { return coefficient_scale() == 0.0; }
};

/// All real roots, ascending, after one Newton polish step each.
/// `multiplicity[k]` counts roots that merged within the classification
/// tolerance 1e-8 * (1 + |root|).
struct CubicRoots {
    std::vector<double> roots;
    std::vector<int> multiplicity;
};

CubicRoots solve_cubic_all(const CubicPoly& p);

/// Selected stepsize root:
///   one real root            -> that root;
///   simple + double root     -> the multiplicity-one root;
///   three distinct roots     -> the outer root farther from the middle one,
///                               ties broken by the smaller antiderivative
///                               value, then the larger root.
/// Degenerate leading coefficients fall back to quadratic/linear selection.
/// Throws ZeroPolynomialError when every coefficient vanishes.
///
/// The selection rules are derived from minimizing a coercive quartic. For
/// the direction-form equation the cubic is not the derivative of any
/// objective, so the rules are a heuristic there; they are applied unchanged
/// (the antiderivative plays the quartic's role) and work well in practice.
double solve_cubic_select(const CubicPoly& p);

/// Which equation the stepsize root solves. The direction form solves
/// trace(V_i^T g(X_i + a V_i)) = 0 along the update field itself; the gradient
/// form solves trace(V_i^T grad f(X_i + a V_i)) = 0. For non-triangularized
/// directions the two coincide up to a constant factor.
enum class LinesearchEquation { kDirectionForm, kGradientForm };

enum class StepsizeKind { kFixed, kExactFull, kExactColumnwise };

struct StepsizeStrategy {
    StepsizeKind kind = StepsizeKind::kExactColumnwise;
    /// Fixed stepsize; empty selects the auto value 1/(8 rho).
    std::optional<double> alpha;
    LinesearchEquation equation = LinesearchEquation::kDirectionForm;
};

/// Resolves the fixed stepsize: a configured alpha must be positive and is
/// returned as is; auto mode uses 1/(8 rho), safely inside the
/// constant-stepsize bound.
double fixed_stepsize(std::optional<double> alpha, std::optional<double> rho);

/// The p-by-p Gram products of a linesearch instance. R is V^T A X; with a
/// symmetric operator R equals Ta^T but both are kept for cache-friendly
/// row/column access in the cumulative sums.
struct LinesearchGrams {
    Matrix s;    // X^T X
    Matrix t;    // X^T V
    Matrix tr;   // V^T X
    Matrix w;    // V^T V
    Matrix sa;   // X^T A X
    Matrix ta;   // X^T A V
    Matrix r;    // V^T A X
    Matrix wa;   // V^T A V
};

void compute_linesearch_grams(const Matrix& x, const Matrix& v, const Matrix& ax,
                              const Matrix& av, LinesearchGrams& out);

/// Cubic stepsize polynomials for every leading sub-block i = 1..p, computed
/// cumulatively so the total cost matches one full-block evaluation. Entry
/// p-1 is the full-block polynomial. `triangularized` selects the
/// upper-triangular Gram contractions; with the gradient-form equation the
/// full contractions are used regardless.
std::vector<CubicPoly> columnwise_linesearch_polys(Objective objective, bool triangularized,
                                                   LinesearchEquation equation,
                                                   const LinesearchGrams& grams);

/// Convenience wrappers that form the Gram products themselves (two operator
/// applications: AX and AV).
CubicPoly full_linesearch_poly_obj1(const SymmetricOperator& a, const Matrix& x, const Matrix& v);
CubicPoly columnwise_linesearch_obj1(const SymmetricOperator& a, const Matrix& x, const Matrix& v,
                                     int i);
CubicPoly columnwise_linesearch_obj2(const SymmetricOperator& a, const Matrix& x, const Matrix& v,
                                     int i);

}  // namespace triofm
