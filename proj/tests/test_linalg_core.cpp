#include <doctest.h>

#include <cstdio>

#include "support/test_helpers.hpp"
#include "triofm/block_vector.hpp"
#include "triofm/matrix_market.hpp"
#include "triofm/operator.hpp"
#include "triofm/small_eig.hpp"

using namespace triofm;

TEST_CASE("apply_operator: identity and diagonal action") {
    BlockVector x(2, 2);
    x.values(0, 0) = 1.0;
    x.values(1, 1) = 1.0;

    SymmetricOperator identity = SymmetricOperator::diagonal({1.0, 1.0});
    Matrix ax = apply_operator(identity, x);
    CHECK(test::max_abs_diff(ax, x.values) == 0.0);
    CHECK(x.column_access_count == 2);

    SymmetricOperator diag = SymmetricOperator::diagonal({-2.0, -1.0});
    ax = apply_operator(diag, x);
    CHECK(ax(0, 0) == -2.0);
    CHECK(ax(1, 1) == -1.0);
    CHECK(ax(0, 1) == 0.0);
    CHECK(x.column_access_count == 4);
}

TEST_CASE("apply_operator: locked columns are skipped and not counted") {
    BlockVector x(3, 3);
    for (int j = 0; j < 3; ++j) x.values(j, j) = 1.0;
    x.lock_through(0);
    SymmetricOperator diag = SymmetricOperator::diagonal({1.0, 2.0, 3.0});
    Matrix ax = apply_operator(diag, x, /*skip_locked=*/true);
    CHECK(x.column_access_count == 2);
    CHECK(ax(0, 0) == 0.0);  // skipped column left zero
    CHECK(ax(1, 1) == 2.0);
    CHECK(ax(2, 2) == 3.0);
}

TEST_CASE("apply_operator: dimension mismatch is a structured error") {
    BlockVector x(3, 1);
    SymmetricOperator diag = SymmetricOperator::diagonal({1.0, 2.0});
    CHECK_THROWS_AS(apply_operator(diag, x), DimensionError);
}

TEST_CASE("apply_operator: sparse CSR agrees with its dense materialization") {
    const int n = 100;
    Rng rng(7);
    // Random symmetric sparse pattern via a banded + random construction.
    Matrix dense(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
            if (i == j || rng.next_uniform() < 0.05) {
                const double v = rng.next_gaussian();
                dense(i, j) = v;
                dense(j, i) = v;
            }
        }
    std::vector<int> row_ptr{0};
    std::vector<int> col_idx;
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (dense(i, j) != 0.0) {
                col_idx.push_back(j);
                values.push_back(dense(i, j));
            }
        row_ptr.push_back(static_cast<int>(col_idx.size()));
    }
    SymmetricOperator sparse = SymmetricOperator::csr(n, row_ptr, col_idx, values);
    SymmetricOperator as_dense = SymmetricOperator::dense(dense);

    BlockVector x(test::random_matrix(n, 4, 11));
    BlockVector y = x;
    const Matrix a1 = apply_operator(sparse, x);
    const Matrix a2 = apply_operator(as_dense, y);
    const double scale = frobenius_norm(a2);
    CHECK(test::max_abs_diff(a1, a2) <= 1e-13 * scale);
}

TEST_CASE("operator symmetry: u^T(Av) == v^T(Au) for random pairs") {
    const int n = 40;
    Matrix sym = test::random_symmetric(n, 3);
    SymmetricOperator op = SymmetricOperator::dense(sym);
    const double norm = estimate_norm(op);
    std::vector<double> au(n), av(n);
    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> u(n), v(n);
        for (auto& x : u) x = rng.next_gaussian();
        for (auto& x : v) x = rng.next_gaussian();
        op.apply_column(u.data(), au.data());
        op.apply_column(v.data(), av.data());
        const double left = dot(u.data(), av.data(), n);
        const double right = dot(v.data(), au.data(), n);
        CHECK(std::fabs(left - right) <=
              1e-12 * norm * norm2(u.data(), n) * norm2(v.data(), n));
    }
}

TEST_CASE("block vector: prefix locking") {
    BlockVector x(4, 3);
    CHECK(x.locked_prefix() == 0);
    x.lock_through(1);
    CHECK(x.locked_prefix() == 2);
    CHECK(x.unlocked_count() == 1);
    CHECK_THROWS_AS(x.lock_through(5), DimensionError);
}

TEST_CASE("triu: definition and idempotence") {
    Matrix eye = Matrix::identity(2);
    CHECK(test::max_abs_diff(triu(eye), eye) == 0.0);

    Matrix m(2, 2);
    m(0, 0) = 1;
    m(0, 1) = 2;
    m(1, 0) = 3;
    m(1, 1) = 4;
    Matrix t = triu(m);
    CHECK(t(0, 0) == 1);
    CHECK(t(0, 1) == 2);
    CHECK(t(1, 0) == 0);
    CHECK(t(1, 1) == 4);

    // Partition identity: M = triu(M) + strict lower part, exactly.
    Matrix r = test::random_matrix(5, 5, 17);
    Matrix u = triu(r);
    Matrix strict_lower(5, 5);
    for (int j = 0; j < 5; ++j)
        for (int i = j + 1; i < 5; ++i) strict_lower(i, j) = r(i, j);
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 5; ++i) CHECK(u(i, j) + strict_lower(i, j) == r(i, j));

    CHECK(test::max_abs_diff(triu(u), u) == 0.0);
}

TEST_CASE("sym_eig: closed-form cases") {
    Matrix d(3, 3);
    d(0, 0) = 3;
    d(1, 1) = 1;
    d(2, 2) = 2;
    SymEigResult r = sym_eig(d);
    CHECK(r.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-14));
    // Permutation eigenvectors.
    CHECK(std::fabs(r.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::fabs(r.vectors(2, 1)) == doctest::Approx(1.0));
    CHECK(std::fabs(r.vectors(0, 2)) == doctest::Approx(1.0));

    Matrix flip(2, 2);
    flip(0, 1) = 1;
    flip(1, 0) = 1;
    r = sym_eig(flip);
    CHECK(r.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sym_eig: residual and orthogonality on random input") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Matrix m = test::random_symmetric(8, seed);
        SymEigResult r = sym_eig(m);
        const double norm = frobenius_norm(m);
        // M V = V diag(lambda)
        Matrix mv = matmul(m, r.vectors);
        for (int j = 0; j < 8; ++j)
            for (int i = 0; i < 8; ++i)
                mv(i, j) -= r.vectors(i, j) * r.eigenvalues[static_cast<std::size_t>(j)];
        CHECK(frobenius_norm(mv) <= 1e-12 * norm);
        Matrix vtv = matmul_tn(r.vectors, r.vectors);
        for (int i = 0; i < 8; ++i) vtv(i, i) -= 1.0;
        CHECK(frobenius_norm(vtv) <= 1e-12);
    }
}

TEST_CASE("sym_eig: characteristic-polynomial oracle at small sizes") {
    for (int n : {2, 3, 4}) {
        for (std::uint64_t seed : {10u, 20u, 30u}) {
            Matrix m = test::random_symmetric(n, seed + static_cast<std::uint64_t>(n));
            SymEigResult r = sym_eig(m);
            std::vector<double> oracle = test::char_poly_eigenvalues(m);
            REQUIRE(oracle.size() == static_cast<std::size_t>(n));
            const double scale = frobenius_norm(m) + 1.0;
            for (int i = 0; i < n; ++i)
                CHECK(std::fabs(r.eigenvalues[static_cast<std::size_t>(i)] -
                                oracle[static_cast<std::size_t>(i)]) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("sym_eig: dimension guard") {
    Matrix m = test::random_symmetric(70, 4);
    CHECK_THROWS_AS(sym_eig(m), DimensionError);
    CHECK_NOTHROW(sym_eig(m, 128));
}

TEST_CASE("gen_eig: closed-form cases and residual contract") {
    Matrix s(2, 2);
    s(0, 0) = -2;
    s(1, 1) = -1;
    GenEigResult r = gen_eig(s, Matrix::identity(2));
    CHECK(r.eigenvalues[0] == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(r.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-13));

    // S = 2 B for SPD B: all generalized eigenvalues are 2.
    Matrix b = test::random_negative_definite(4, 9);
    for (double& v : b.data) v = -v;  // SPD
    Matrix s2 = b;
    for (double& v : s2.data) v *= 2.0;
    r = gen_eig(s2, b);
    for (double v : r.eigenvalues) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));

    // Random SPD pair: residual + B-orthonormality as the contract states.
    Matrix s3 = test::random_symmetric(6, 31);
    Matrix b3 = test::random_negative_definite(6, 32);
    for (double& v : b3.data) v = -v;
    r = gen_eig(s3, b3);
    Matrix sq = matmul(s3, r.vectors);
    Matrix bq = matmul(b3, r.vectors);
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 6; ++i)
            sq(i, j) -= bq(i, j) * r.eigenvalues[static_cast<std::size_t>(j)];
    CHECK(frobenius_norm(sq) <= 1e-11 * frobenius_norm(s3));
    Matrix qbq = matmul_tn(r.vectors, matmul(b3, r.vectors));
    for (int i = 0; i < 6; ++i) qbq(i, i) -= 1.0;
    CHECK(frobenius_norm(qbq) <= 1e-11);

    // gen_eig with B = I matches sym_eig.
    SymEigResult se = sym_eig(s3);
    r = gen_eig(s3, Matrix::identity(6));
    for (int i = 0; i < 6; ++i)
        CHECK(std::fabs(r.eigenvalues[static_cast<std::size_t>(i)] -
                        se.eigenvalues[static_cast<std::size_t>(i)]) <= 1e-11);
}

TEST_CASE("gen_eig: singular B is a structured error") {
    Matrix b(3, 3);  // rank 1
    b(0, 0) = 1.0;
    CHECK_THROWS_AS(gen_eig(test::random_symmetric(3, 2), b), SingularError);
}

TEST_CASE("random_orthogonal: contract") {
    Matrix one = random_orthogonal(1, 42);
    CHECK(one(0, 0) == doctest::Approx(1.0));  // sign-fixed scalar

    Matrix u = random_orthogonal(100, 7);
    Matrix utu = matmul_tn(u, u);
    for (int i = 0; i < 100; ++i) utu(i, i) -= 1.0;
    CHECK(frobenius_norm(utu) <= 1e-12);

    Matrix u2 = random_orthogonal(100, 7);
    CHECK(test::max_abs_diff(u, u2) == 0.0);  // bitwise determinism

    Matrix u3 = random_orthogonal(100, 8);
    CHECK(test::max_abs_diff(u, u3) > 1e-3);
}

TEST_CASE("matrix market: round trips preserve doubles exactly") {
    const std::string dir = "/tmp/triofm_test_mm";
    std::remove((dir + ".mtx").c_str());

    Matrix m = test::random_matrix(7, 3, 77);
    write_matrix_market(dir + ".mtx", m);
    Matrix back = read_matrix_market(dir + ".mtx");
    CHECK(test::max_abs_diff(m, back) == 0.0);

    SymmetricOperator diag = SymmetricOperator::diagonal({1.5, -2.25, 3.125});
    write_matrix_market(dir + ".diag.mtx", diag);
    SymmetricOperator op = read_operator_matrix_market(dir + ".diag.mtx");
    CHECK(op.kind() == OperatorKind::kSparseCsr);
    Matrix dense = op.to_dense();
    CHECK(dense(0, 0) == 1.5);
    CHECK(dense(1, 1) == -2.25);
    CHECK(dense(2, 2) == 3.125);
    CHECK(dense(0, 1) == 0.0);
}

TEST_CASE("matrix market: malformed input is a config error") {
    const std::string path = "/tmp/triofm_test_bad.mtx";
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fprintf(f, "not a matrix market file\n");
    std::fclose(f);
    CHECK_THROWS_AS(read_matrix_market(path), ConfigError);
}

TEST_CASE("estimate_norm approximates the spectral norm") {
    std::vector<double> d{-3.0, 1.0, 2.0, -0.5};
    SymmetricOperator op = SymmetricOperator::diagonal(d);
    CHECK(estimate_norm(op) == doctest::Approx(3.0).epsilon(1e-6));
}
