#include <doctest.h>

#include "support/test_helpers.hpp"
#include "triofm/linesearch.hpp"
#include "triofm/small_eig.hpp"

using namespace triofm;

namespace {

Matrix leading_columns(const Matrix& x, int count) {
    Matrix sub(x.rows, count);
    for (int j = 0; j < count; ++j) std::copy(x.col(j), x.col(j) + x.rows, sub.col(j));
    return sub;
}

double direct_direction_trace(Objective obj, const SymmetricOperator& a, const Matrix& x,
                              const Matrix& v, double alpha) {
    Matrix y = x;
    for (std::size_t k = 0; k < y.data.size(); ++k) y.data[k] += alpha * v.data[k];
    const Matrix g = obj == Objective::kObj1 ? tri_direction_obj1(a, y) : tri_direction_obj2(a, y);
    double tr = 0.0;
    for (std::size_t k = 0; k < g.data.size(); ++k) tr += v.data[k] * g.data[k];
    return tr;
}

}  // namespace

TEST_CASE("cubic selection: the three root regimes") {
    CHECK(solve_cubic_select({1, 0, 0, -8}) == doctest::Approx(2.0).epsilon(1e-12));

    // (a-1)^2 (a+2): the multiplicity-one root wins.
    CHECK(solve_cubic_select({1, 0, -3, 2}) == doctest::Approx(-2.0).epsilon(1e-10));

    // Roots {-1-sqrt2, -1, sqrt2-1}: equidistant tie, equal quartic values,
    // larger stepsize wins.
    CHECK(solve_cubic_select({1, 3, 1, -1}) ==
          doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));

    // Three distinct roots, no tie: the outer root farther from the middle.
    // (a+4)(a-1)(a-2) = a^3 + a^2 - 10a + 8: middle 1, distances 5 and 1.
    CHECK(solve_cubic_select({1, 1, -10, 8}) == doctest::Approx(-4.0).epsilon(1e-10));

    CHECK_THROWS_AS(solve_cubic_select({0, 0, 0, 0}), ZeroPolynomialError);
    CHECK_THROWS_AS(solve_cubic_select({0, 0, 0, 3.5}), ZeroPolynomialError);

    // Degenerate leading coefficients.
    CHECK(solve_cubic_select({0, 0, 2, -6}) == doctest::Approx(3.0));
    // Quadratic 1*(a-1)(a-3): positive leading, larger root is the merit min.
    CHECK(solve_cubic_select({0, 1, -4, 3}) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cubic roots: 1000 random factored cubics recovered to 1e-9") {
    Rng rng(2024);
    int checked = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        double r[3];
        for (double& v : r) v = -10.0 + 20.0 * rng.next_uniform();
        std::sort(r, r + 3);
        const double scale = 0.1 + 3.0 * rng.next_uniform();
        // (a-r0)(a-r1)(a-r2) expanded.
        const CubicPoly p{scale, -scale * (r[0] + r[1] + r[2]),
                          scale * (r[0] * r[1] + r[0] * r[2] + r[1] * r[2]),
                          -scale * r[0] * r[1] * r[2]};
        CubicRoots roots = solve_cubic_all(p);
        REQUIRE(!roots.roots.empty());
        // Every input root must be matched by a computed root.
        for (double want : r) {
            double best = 1e300;
            for (double got : roots.roots) best = std::min(best, std::fabs(got - want));
            CHECK(best <= 1e-9 * (1.0 + std::fabs(want)));
            ++checked;
        }
    }
    CHECK(checked == 3000);
}

TEST_CASE("full linesearch polynomial for objective one") {
    SymmetricOperator a = SymmetricOperator::diagonal({-2.0});
    Matrix x(1, 1), v(1, 1);
    x(0, 0) = 1.0;
    v(0, 0) = 1.0;
    const CubicPoly p = full_linesearch_poly_obj1(a, x, v);
    CHECK(p.c3 == doctest::Approx(1.0));
    CHECK(p.c2 == doctest::Approx(3.0));
    CHECK(p.c1 == doctest::Approx(1.0));
    CHECK(p.c0 == doctest::Approx(-1.0));
    // The selected root minimizes (-2 + (1+a)^2)^2.
    CHECK(solve_cubic_select(p) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));

    Matrix zero(1, 1);
    const CubicPoly pz = full_linesearch_poly_obj1(a, x, zero);
    CHECK(pz.is_zero());
    CHECK_THROWS_AS(solve_cubic_select(pz), ZeroPolynomialError);
}

TEST_CASE("full linesearch polynomial equals the direct gradient trace") {
    SymmetricOperator a = SymmetricOperator::dense(test::random_symmetric(8, 19));
    const Matrix x = test::random_matrix(8, 2, 29);
    const Matrix v = test::random_matrix(8, 2, 39);
    const CubicPoly p = full_linesearch_poly_obj1(a, x, v);
    Rng rng(49);
    for (int rep = 0; rep < 5; ++rep) {
        const double alpha = -2.0 + 4.0 * rng.next_uniform();
        Matrix y = x;
        for (std::size_t k = 0; k < y.data.size(); ++k) y.data[k] += alpha * v.data[k];
        const Matrix g = grad_obj1(a, y);
        double tr = 0.0;
        for (std::size_t k = 0; k < g.data.size(); ++k) tr += v.data[k] * g.data[k];
        tr /= 4.0;  // the polynomial drops the gradient's constant factor
        CHECK(p.eval(alpha) == doctest::Approx(tr).epsilon(1e-10));
    }
}

TEST_CASE("columnwise polynomial: first column reduces to the single-column case") {
    SymmetricOperator a = SymmetricOperator::dense(test::random_symmetric(6, 59));
    const Matrix x = test::random_matrix(6, 3, 69);
    const Matrix v = test::random_matrix(6, 3, 79);
    const CubicPoly whole = columnwise_linesearch_obj1(a, x, v, 1);
    const CubicPoly single =
        full_linesearch_poly_obj1(a, leading_columns(x, 1), leading_columns(v, 1));
    CHECK(whole.c3 == doctest::Approx(single.c3).epsilon(1e-13));
    CHECK(whole.c2 == doctest::Approx(single.c2).epsilon(1e-13));
    CHECK(whole.c1 == doctest::Approx(single.c1).epsilon(1e-13));
    CHECK(whole.c0 == doctest::Approx(single.c0).epsilon(1e-13));
}

TEST_CASE("rotated minimizer: the full search stalls, the columnwise one moves") {
    // X = U_p sqrt(-L_p) Q with a 45-degree rotation: a global minimizer of
    // the residual objective but not a triangularized fixed point.
    SymmetricOperator a = SymmetricOperator::diagonal({-2.0, -1.0});
    const double c = std::cos(0.25 * 3.141592653589793), s = std::sin(0.25 * 3.141592653589793);
    Matrix x(2, 2);
    x(0, 0) = std::sqrt(2.0) * c;
    x(0, 1) = std::sqrt(2.0) * -s;
    x(1, 0) = s;
    x(1, 1) = c;

    Matrix v = tri_direction_obj1(a, x);
    for (double& val : v.data) val = -val;
    REQUIRE(frobenius_norm(v) > 0.1);

    // Direction form, column 1: p(0) = -||g_1||^2 != 0, so alpha_1 != 0.
    const CubicPoly col1 = columnwise_linesearch_obj1(a, x, v, 1);
    CHECK(std::fabs(col1.c0) > 1e-6);
    CHECK(std::fabs(solve_cubic_select(col1)) > 1e-6);

    // Gradient form over the whole block: alpha = 0 is the stall the
    // triangularized search exists to avoid.
    const CubicPoly full = full_linesearch_poly_obj1(a, x, v);
    CHECK(std::fabs(full.c0) <= 1e-12);
}

TEST_CASE("columnwise polynomial for objective two: scalar case and tie-break") {
    SymmetricOperator a = SymmetricOperator::diagonal({-2.0});
    Matrix x(1, 1), v(1, 1);
    v(0, 0) = 1.0;
    const CubicPoly p = columnwise_linesearch_obj2(a, x, v, 1);
    // trace form 2 a alpha - 2 a alpha^3 with a = -2.
    CHECK(p.c3 == doctest::Approx(4.0));
    CHECK(p.c2 == doctest::Approx(0.0));
    CHECK(p.c1 == doctest::Approx(-4.0));
    CHECK(p.c0 == doctest::Approx(0.0));
    CHECK(solve_cubic_select(p) == doctest::Approx(1.0).epsilon(1e-12));

    Matrix zero(1, 1);
    CHECK(columnwise_linesearch_obj2(a, x, zero, 1).is_zero());
}

TEST_CASE("columnwise polynomials equal the direct direction traces") {
    const int n = 8, p = 2;
    Matrix neg = test::random_negative_definite(n, 99);
    SymmetricOperator a = SymmetricOperator::dense(neg);
    const Matrix x = test::random_matrix(n, p, 89);
    const Matrix v = test::random_matrix(n, p, 98);
    Rng rng(97);
    for (int i = 1; i <= p; ++i) {
        const Matrix xi = leading_columns(x, i);
        const Matrix vi = leading_columns(v, i);
        const CubicPoly p1 = columnwise_linesearch_obj1(a, x, v, i);
        const CubicPoly p2 = columnwise_linesearch_obj2(a, x, v, i);
        for (int rep = 0; rep < 5; ++rep) {
            const double alpha = -1.5 + 3.0 * rng.next_uniform();
            const double d1 = direct_direction_trace(Objective::kObj1, a, xi, vi, alpha);
            const double d2 = direct_direction_trace(Objective::kObj2, a, xi, vi, alpha);
            CHECK(p1.eval(alpha) == doctest::Approx(d1).epsilon(1e-10));
            CHECK(p2.eval(alpha) == doctest::Approx(d2).epsilon(1e-10));
        }
    }
}

TEST_CASE("linesearch exactness and descent") {
    Rng rng(123);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 6;
        const int p = 1 + static_cast<int>(rng.next_u64() % 3);
        const bool second = rep % 2 == 1;
        Matrix mat = second ? test::random_negative_definite(n, 1000 + rep)
                            : test::random_symmetric(n, 1000 + rep);
        SymmetricOperator a = SymmetricOperator::dense(mat);
        const Matrix x = test::random_matrix(n, p, 2000 + rep);
        const Matrix v = test::random_matrix(n, p, 3000 + rep);
        const CubicPoly poly = second ? columnwise_linesearch_obj2(a, x, v, p)
                                      : columnwise_linesearch_obj1(a, x, v, p);
        const double alpha = solve_cubic_select(poly);
        CHECK(std::fabs(poly.eval(alpha)) <= 1e-9 * poly.coefficient_scale());
    }

    // Descent along the negative gradient with the full exact search.
    for (int rep = 0; rep < 20; ++rep) {
        SymmetricOperator a = SymmetricOperator::dense(test::random_symmetric(7, 5000 + rep));
        const Matrix x = test::random_matrix(7, 2, 6000 + rep);
        Matrix v = grad_obj1(a, x);
        for (double& val : v.data) val = -val;
        if (frobenius_norm(v) == 0.0) continue;
        const double alpha = solve_cubic_select(full_linesearch_poly_obj1(a, x, v));
        Matrix y = x;
        for (std::size_t k = 0; k < y.data.size(); ++k) y.data[k] += alpha * v.data[k];
        CHECK(eval_obj1(a, y) <= eval_obj1(a, x) + 1e-12);
    }
}

TEST_CASE("columnwise stepsize coefficients decouple from later columns exactly") {
    SymmetricOperator a = SymmetricOperator::dense(test::random_symmetric(9, 311));
    const Matrix x = test::random_matrix(9, 4, 312);
    const Matrix v = test::random_matrix(9, 4, 313);
    Matrix ax(9, 4), av(9, 4);
    apply_block(a, x, nullptr, ax);
    apply_block(a, v, nullptr, av);
    LinesearchGrams full;
    compute_linesearch_grams(x, v, ax, av, full);
    const auto polys_full = columnwise_linesearch_polys(
        Objective::kObj1, true, LinesearchEquation::kDirectionForm, full);

    for (int i = 1; i <= 4; ++i) {
        const Matrix xi = leading_columns(x, i);
        const Matrix vi = leading_columns(v, i);
        Matrix axi(9, i), avi(9, i);
        apply_block(a, xi, nullptr, axi);
        apply_block(a, vi, nullptr, avi);
        LinesearchGrams sub;
        compute_linesearch_grams(xi, vi, axi, avi, sub);
        const auto polys_sub = columnwise_linesearch_polys(
            Objective::kObj1, true, LinesearchEquation::kDirectionForm, sub);
        CHECK(polys_full[static_cast<std::size_t>(i - 1)].c3 == polys_sub.back().c3);
        CHECK(polys_full[static_cast<std::size_t>(i - 1)].c2 == polys_sub.back().c2);
        CHECK(polys_full[static_cast<std::size_t>(i - 1)].c1 == polys_sub.back().c1);
        CHECK(polys_full[static_cast<std::size_t>(i - 1)].c0 == polys_sub.back().c0);
    }
}

TEST_CASE("fixed stepsize resolution") {
    CHECK(fixed_stepsize(0.4, std::nullopt) == 0.4);
    CHECK(fixed_stepsize(std::nullopt, 1.0) == doctest::Approx(0.125));
    CHECK_THROWS_AS(fixed_stepsize(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(fixed_stepsize(-0.1, 1.0), ConfigError);
    CHECK_THROWS_AS(fixed_stepsize(std::nullopt, std::nullopt), ConfigError);
}

TEST_CASE("linesearch cubics carry a nonnegative leading coefficient") {
    // The restricted quartic grows at infinity, so its derivative's leading
    // coefficient cannot be negative (negative definite operators for the
    // orbital objective).
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 7, p = 3;
        const Matrix x = test::random_matrix(n, p, 7000 + static_cast<std::uint64_t>(rep));
        const Matrix v = test::random_matrix(n, p, 8000 + static_cast<std::uint64_t>(rep));

        SymmetricOperator a1 =
            SymmetricOperator::dense(test::random_symmetric(n, 9000 + static_cast<std::uint64_t>(rep)));
        for (int i = 1; i <= p; ++i)
            CHECK(columnwise_linesearch_obj1(a1, x, v, i).c3 >= -1e-12);

        SymmetricOperator a2 = SymmetricOperator::dense(
            test::random_negative_definite(n, 9500 + static_cast<std::uint64_t>(rep)));
        for (int i = 1; i <= p; ++i)
            CHECK(columnwise_linesearch_obj2(a2, x, v, i).c3 >= -1e-12);
    }
}
