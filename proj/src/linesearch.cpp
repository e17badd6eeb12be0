#include "triofm/linesearch.hpp"

#include <algorithm>
#include <cmath>

namespace triofm {

double CubicPoly::coefficient_scale() const {
    return std::fabs(c3) + std::fabs(c2) + std::fabs(c1) + std::fabs(c0);
}

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kDegenerateRel = 1e-14;  // leading-coefficient dropout
constexpr double kMultiplicityRel = 1e-8;  // double-root classification

double newton_polish(const CubicPoly& p, double r) {
    for (int it = 0; it < 2; ++it) {
        const double f = p.eval(r);
        const double d = p.derivative(r);
        if (d == 0.0) break;
        const double step = f / d;
        // Near a multiple root the quotient is unreliable; leave the closed
        // form alone rather than jump away.
        if (!std::isfinite(step) || std::fabs(step) > 0.5 * (1.0 + std::fabs(r))) break;
        r -= step;
    }
    return r;
}

/// Root of largest magnitude by Cardano in the one-real-root regime, written
/// to avoid cancellation between the two cube roots.
double cardano_single_root(double b, double p, double q) {
    const double disc = q * q / 4.0 + p * p * p / 27.0;  // > 0 here
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    return u + v - b / 3.0;
}

/// Bracketed bisection fallback for a guaranteed real root, then deflation.
/// Used when the closed forms fail to produce a finite, polishable root set.
double bisect_root(const CubicPoly& p, double lo, double hi) {
    double flo = p.eval(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = p.eval(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

CubicRoots fallback_roots(const CubicPoly& p) {
    // Cauchy bound on root magnitude.
    const double bound =
        1.0 + std::max({std::fabs(p.c2), std::fabs(p.c1), std::fabs(p.c0)}) / std::fabs(p.c3);
    const double fneg = p.eval(-bound);
    double r0;
    if ((fneg < 0.0) != (p.eval(bound) < 0.0))
        r0 = bisect_root(p, -bound, bound);
    else
        r0 = newton_polish(p, 0.0);
    r0 = newton_polish(p, r0);
    // Deflate: c3 a^2 + (c2 + c3 r0) a + (c1 + (c2 + c3 r0) r0).
    const double qb = p.c2 + p.c3 * r0;
    const double qc = p.c1 + qb * r0;
    CubicRoots out;
    out.roots.push_back(r0);
    const double disc = qb * qb - 4.0 * p.c3 * qc;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double t = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
        double r1 = t / p.c3;
        double r2 = (t != 0.0) ? qc / t : -qb / p.c3 - r1;
        out.roots.push_back(newton_polish(p, r1));
        out.roots.push_back(newton_polish(p, r2));
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

void classify_multiplicity(CubicRoots& r) {
    std::sort(r.roots.begin(), r.roots.end());
    std::vector<double> merged;
    std::vector<int> mult;
    for (double root : r.roots) {
        if (!merged.empty() &&
            std::fabs(root - merged.back()) <= kMultiplicityRel * (1.0 + std::fabs(root))) {
            // Keep the average of the cluster as the representative root.
            merged.back() = (merged.back() * mult.back() + root) / (mult.back() + 1);
            ++mult.back();
        } else {
            merged.push_back(root);
            mult.push_back(1);
        }
    }
    r.roots = std::move(merged);
    r.multiplicity = std::move(mult);
}

}  // namespace

CubicRoots solve_cubic_all(const CubicPoly& p) {
    const double scale = p.coefficient_scale();
    if (scale == 0.0 || !std::isfinite(scale))
        throw ZeroPolynomialError("cubic: all coefficients vanish");
    CubicRoots out;
    if (std::fabs(p.c3) <= kDegenerateRel * scale) {
        if (std::fabs(p.c2) <= kDegenerateRel * scale) {
            if (std::fabs(p.c1) <= kDegenerateRel * scale)
                throw ZeroPolynomialError("cubic: degenerate to a nonzero constant");
            out.roots.push_back(-p.c0 / p.c1);
        } else {
            const double disc = p.c1 * p.c1 - 4.0 * p.c2 * p.c0;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                const double t = -0.5 * (p.c1 + (p.c1 >= 0.0 ? sq : -sq));
                double r1 = t / p.c2;
                double r2 = (t != 0.0) ? p.c0 / t : r1;
                out.roots.push_back(r1);
                out.roots.push_back(r2);
            }
        }
        for (double& r : out.roots) r = newton_polish(p, r);
        classify_multiplicity(out);
        return out;
    }

    const double b = p.c2 / p.c3;
    const double c = p.c1 / p.c3;
    const double d = p.c0 / p.c3;
    // Depressed form t^3 + q1 t + q0 with a = t - b/3.
    const double q1 = c - b * b / 3.0;
    const double q0 = d - b * c / 3.0 + 2.0 * b * b * b / 27.0;
    const double disc = -4.0 * q1 * q1 * q1 - 27.0 * q0 * q0;
    const double disc_scale = std::max(q1 * q1 * std::fabs(q1), q0 * q0) + 1e-300;

    if (disc > 1e-12 * disc_scale) {
        // Three distinct real roots: trigonometric form.
        const double m = 2.0 * std::sqrt(-q1 / 3.0);
        double arg = 3.0 * q0 / (q1 * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            out.roots.push_back(m * std::cos(theta - 2.0 * kPi * k / 3.0) - b / 3.0);
    } else if (disc < -1e-12 * disc_scale) {
        out.roots.push_back(cardano_single_root(b, q1, q0));
    } else {
        // Borderline discriminant: a repeated root (or numerically nearly so).
        if (std::fabs(q1) <= 1e-14 * (1.0 + b * b)) {
            out.roots.assign(3, -b / 3.0);  // triple root
        } else {
            const double r_double = -3.0 * q0 / (2.0 * q1) - b / 3.0;
            const double r_simple = 3.0 * q0 / q1 - b / 3.0;
            out.roots = {r_simple, r_double, r_double};
        }
    }

    for (double& r : out.roots) r = newton_polish(p, r);
    bool ok = true;
    for (double r : out.roots)
        if (!std::isfinite(r) || std::fabs(p.eval(r)) > 1e-6 * scale * (1.0 + std::fabs(r) * std::fabs(r) * std::fabs(r)))
            ok = false;
    if (!ok || out.roots.empty()) out = fallback_roots(p);

    classify_multiplicity(out);
    return out;
}

double solve_cubic_select(const CubicPoly& p) {
    const double scale = p.coefficient_scale();
    if (scale == 0.0 || !std::isfinite(scale))
        throw ZeroPolynomialError("cubic: all coefficients vanish");

    if (std::fabs(p.c3) <= kDegenerateRel * scale) {
        CubicRoots r = solve_cubic_all(p);
        if (r.roots.empty())
            throw ZeroPolynomialError("cubic: degenerate quadratic has no real root");
        if (r.roots.size() == 1) return r.roots[0];
        // Quadratic: the antiderivative cubic has its local minimum at the
        // root where the derivative turns negative-to-positive.
        return p.c2 > 0.0 ? r.roots.back() : r.roots.front();
    }

    CubicRoots r = solve_cubic_all(p);
    if (r.roots.size() == 1) return r.roots[0];
    if (r.roots.size() == 2) {
        // One simple and one double root; return the simple one.
        return r.multiplicity[0] == 1 ? r.roots[0] : r.roots[1];
    }
    const double d_low = r.roots[1] - r.roots[0];
    const double d_high = r.roots[2] - r.roots[1];
    const double spread = r.roots[2] - r.roots[0];
    if (std::fabs(d_low - d_high) > kMultiplicityRel * (1.0 + spread))
        return d_low > d_high ? r.roots[0] : r.roots[2];
    // Equidistant outer roots: lower restricted-quartic value wins, then the
    // larger stepsize.
    const double q_low = p.antiderivative(r.roots[0]);
    const double q_high = p.antiderivative(r.roots[2]);
    const double q_scale = std::fabs(q_low) + std::fabs(q_high);
    if (std::fabs(q_low - q_high) <= 1e-12 * (q_scale + 1e-300)) return r.roots[2];
    return q_low < q_high ? r.roots[0] : r.roots[2];
}

double fixed_stepsize(std::optional<double> alpha, std::optional<double> rho) {
    if (alpha) {
        if (!(*alpha > 0.0)) throw ConfigError("fixed stepsize must be positive");
        return *alpha;
    }
    if (!rho || *rho <= 0.0)
        throw ConfigError("auto stepsize needs an operator norm estimate");
    return 1.0 / (8.0 * *rho);
}

void compute_linesearch_grams(const Matrix& x, const Matrix& v, const Matrix& ax,
                              const Matrix& av, LinesearchGrams& g) {
    g.s = matmul_tn(x, x);
    g.t = matmul_tn(x, v);
    g.tr = matmul_tn(v, x);
    g.w = matmul_tn(v, v);
    g.sa = matmul_tn(x, ax);
    g.ta = matmul_tn(x, av);
    g.r = matmul_tn(v, ax);
    g.wa = matmul_tn(v, av);
}

namespace {

// Prefix traces over leading sub-blocks. For trace(M triu(N)) restricted to
// the leading i-by-i block, the increment at block size a is
// sum_{b<=a} M(a,b) N(b,a); the full trace additionally picks up the
// symmetric band sum_{b<a} M(b,a) N(a,b).
void accumulate(std::vector<double>& acc, const Matrix& m, const Matrix& n, bool use_triu,
                double sign) {
    const int p = m.rows;
    for (int a = 0; a < p; ++a) {
        double inc = 0.0;
        for (int b = 0; b <= a; ++b) inc += m(a, b) * n(b, a);
        if (!use_triu)
            for (int b = 0; b < a; ++b) inc += m(b, a) * n(a, b);
        acc[static_cast<std::size_t>(a)] += sign * inc;
    }
}

void accumulate_diag(std::vector<double>& acc, const Matrix& m, double sign) {
    for (int a = 0; a < m.rows; ++a) acc[static_cast<std::size_t>(a)] += sign * m(a, a);
}

std::vector<double> prefix_sums(std::vector<double> v) {
    for (std::size_t k = 1; k < v.size(); ++k) v[k] += v[k - 1];
    return v;
}

}  // namespace

std::vector<CubicPoly> columnwise_linesearch_polys(Objective objective, bool triangularized,
                                                   LinesearchEquation equation,
                                                   const LinesearchGrams& g) {
    const int p = g.s.rows;
    const bool tri = triangularized && equation == LinesearchEquation::kDirectionForm;
    std::vector<double> c3(static_cast<std::size_t>(p), 0.0), c2 = c3, c1 = c3, c0 = c3;

    if (objective == Objective::kObj1) {
        accumulate(c3, g.w, g.w, tri, 1.0);

        accumulate(c2, g.w, g.t, tri, 1.0);
        accumulate(c2, g.w, g.tr, tri, 1.0);
        accumulate(c2, g.tr, g.w, tri, 1.0);

        accumulate_diag(c1, g.wa, 1.0);
        accumulate(c1, g.tr, g.tr, tri, 1.0);
        accumulate(c1, g.tr, g.t, tri, 1.0);
        accumulate(c1, g.w, g.s, tri, 1.0);

        accumulate_diag(c0, g.r, 1.0);
        accumulate(c0, g.tr, g.s, tri, 1.0);
    } else {
        accumulate(c3, g.wa, g.w, tri, -1.0);
        accumulate(c3, g.w, g.wa, tri, -1.0);

        accumulate(c2, g.r, g.w, tri, -1.0);
        accumulate(c2, g.wa, g.t, tri, -1.0);
        accumulate(c2, g.wa, g.tr, tri, -1.0);
        accumulate(c2, g.tr, g.wa, tri, -1.0);
        accumulate(c2, g.w, g.ta, tri, -1.0);
        accumulate(c2, g.w, g.r, tri, -1.0);

        accumulate_diag(c1, g.wa, 2.0);
        accumulate(c1, g.r, g.t, tri, -1.0);
        accumulate(c1, g.r, g.tr, tri, -1.0);
        accumulate(c1, g.wa, g.s, tri, -1.0);
        accumulate(c1, g.tr, g.ta, tri, -1.0);
        accumulate(c1, g.tr, g.r, tri, -1.0);
        accumulate(c1, g.w, g.sa, tri, -1.0);

        accumulate_diag(c0, g.r, 2.0);
        accumulate(c0, g.r, g.s, tri, -1.0);
        accumulate(c0, g.tr, g.sa, tri, -1.0);
    }

    c3 = prefix_sums(std::move(c3));
    c2 = prefix_sums(std::move(c2));
    c1 = prefix_sums(std::move(c1));
    c0 = prefix_sums(std::move(c0));
    std::vector<CubicPoly> polys(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
        polys[static_cast<std::size_t>(i)] = {c3[static_cast<std::size_t>(i)],
                                              c2[static_cast<std::size_t>(i)],
                                              c1[static_cast<std::size_t>(i)],
                                              c0[static_cast<std::size_t>(i)]};
    return polys;
}

namespace {

std::vector<CubicPoly> polys_with_applies(Objective obj, bool tri, LinesearchEquation eq,
                                          const SymmetricOperator& a, const Matrix& x,
                                          const Matrix& v) {
    Matrix ax(x.rows, x.cols), av(v.rows, v.cols);
    apply_block(a, x, nullptr, ax);
    apply_block(a, v, nullptr, av);
    LinesearchGrams g;
    compute_linesearch_grams(x, v, ax, av, g);
    return columnwise_linesearch_polys(obj, tri, eq, g);
}

}  // namespace

CubicPoly full_linesearch_poly_obj1(const SymmetricOperator& a, const Matrix& x, const Matrix& v) {
    return polys_with_applies(Objective::kObj1, false, LinesearchEquation::kGradientForm, a, x, v)
        .back();
}

CubicPoly columnwise_linesearch_obj1(const SymmetricOperator& a, const Matrix& x, const Matrix& v,
                                     int i) {
    if (i < 1 || i > x.cols) throw DimensionError("columnwise linesearch: column out of range");
    return polys_with_applies(Objective::kObj1, true, LinesearchEquation::kDirectionForm, a, x, v)
        [static_cast<std::size_t>(i - 1)];
}

CubicPoly columnwise_linesearch_obj2(const SymmetricOperator& a, const Matrix& x, const Matrix& v,
                                     int i) {
    if (i < 1 || i > x.cols) throw DimensionError("columnwise linesearch: column out of range");
    return polys_with_applies(Objective::kObj2, true, LinesearchEquation::kDirectionForm, a, x, v)
        [static_cast<std::size_t>(i - 1)];
}

}  // namespace triofm
