#include <doctest.h>

#include <bit>
#include <cmath>

#include "support/hubbard_oracle.hpp"
#include "support/test_helpers.hpp"
#include "triofm/problems.hpp"
#include "triofm/small_eig.hpp"

using namespace triofm;



TEST_CASE("spectrum families: the prescribed eigenvalue lists") {
    std::vector<double> uni = spectrum_values({SpectrumFamily::kUniform, 500, 0, 0, {}});
    CHECK(uni[0] == doctest::Approx(-1.0));
    CHECK(uni[1] == doctest::Approx(-0.998));
    CHECK(uni[499] == doctest::Approx(-0.002));

    std::vector<double> log = spectrum_values({SpectrumFamily::kLogarithm, 500, 0, 0, {}});
    CHECK(log[0] == doctest::Approx(-1.024));
    CHECK(log[1] - log[0] == doctest::Approx(0.512));

    std::vector<double> ush = spectrum_values({SpectrumFamily::kUshape, 10, 0, 0, {}});
    const double expected_gaps[5] = {4.0 / 16, 2.0 / 16, 1.0 / 16, 2.0 / 16, 4.0 / 16};
    for (int i = 0; i < 5; ++i)
        CHECK(ush[static_cast<std::size_t>(i) + 1] - ush[static_cast<std::size_t>(i)] ==
              doctest::Approx(expected_gaps[i]));
    CHECK(ush[9] == doctest::Approx(-1.0 / 16));

    // Scaled uniform family used by smaller test instances.
    std::vector<double> scaled = spectrum_values({SpectrumFamily::kUniform, 100, 0, 100, {}});
    CHECK(scaled[0] == doctest::Approx(-1.0));
    CHECK(scaled[99] == doctest::Approx(-0.01));

    CHECK_THROWS_AS(spectrum_values({SpectrumFamily::kExplicit, 3, 0, 0, {1.0}}), ConfigError);
}

TEST_CASE("build_random: eigendecomposition recovers the prescribed spectrum") {
    SpectrumSpec spec{SpectrumFamily::kUniform, 24, 5, 24, {}};
    RandomMatrixProblem prob = build_random(spec);
    const Matrix dense = prob.op.dense_data();

    // Symmetry by construction.
    for (int j = 0; j < 24; ++j)
        for (int i = 0; i < 24; ++i) CHECK(dense(i, j) == dense(j, i));

    SymEigResult eig = sym_eig(dense, 64);
    const std::vector<double> want = spectrum_values(spec);
    for (int i = 0; i < 24; ++i)
        CHECK(std::fabs(eig.eigenvalues[static_cast<std::size_t>(i)] -
                        want[static_cast<std::size_t>(i)]) <= 1e-12);

    // The returned reference eigenpairs really are eigenpairs.
    for (int j = 0; j < 24; ++j) {
        std::vector<double> av(24);
        prob.op.apply_column(prob.reference.vectors.col(j), av.data());
        for (int i = 0; i < 24; ++i)
            CHECK(std::fabs(av[static_cast<std::size_t>(i)] -
                            want[static_cast<std::size_t>(j)] * prob.reference.vectors(i, j)) <=
                  1e-12);
    }

    // Determinism in the seed.
    RandomMatrixProblem again = build_random(spec);
    CHECK(test::max_abs_diff(dense, again.op.dense_data()) == 0.0);
}

TEST_CASE("build_dft: stencil structure and the potential") {
    DftSpec spec{64};
    SymmetricOperator op = build_dft(spec);
    const Matrix dense = op.to_dense();

    // Tridiagonal plus periodic corners, symmetric.
    const double inv_h2 = 0.02 * 64.0 * 64.0;
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            const int d = std::abs(i - j);
            if (d == 0 || d == 1 || d == 63)
                CHECK(dense(i, j) != 0.0);
            else
                CHECK(dense(i, j) == 0.0);
            CHECK(dense(i, j) == dense(j, i));
        }
        if (i + 1 < 64) CHECK(dense(i, i + 1) == doctest::Approx(-inv_h2));
    }
    CHECK(dense(0, 63) == doctest::Approx(-inv_h2));

    // Potential at the first well center: dominated by that well, the others
    // contribute at most depth * exp(-3.125) each.
    const double v_center = dft_potential(spec, 1.0 / 8.0);
    CHECK(v_center < -900.0);
    CHECK(v_center > -900.0 - 3.0 * 1000.0 * std::exp(-3.125));

    // Independent evaluation of the well sum at a few points.
    for (double x : {0.1, 0.33, 0.7}) {
        double expect = 0.0;
        const double centers[4] = {1.0 / 8, 3.0 / 8, 5.0 / 8, 7.0 / 8};
        const double depths[4] = {900.0, 950.0, 1000.0, 850.0};
        for (int i = 0; i < 4; ++i)
            expect -= depths[i] * std::exp(-(x - centers[i]) * (x - centers[i]) / 0.0018);
        CHECK(dft_potential(spec, x) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("build_dft: the four lowest states are bound") {
    // The residual-objective solver needs at least p = 4 negative
    // eigenvalues here.
    DftSpec spec{200};
    SymmetricOperator op = build_dft(spec);
    SymEigResult eig = sym_eig(op.to_dense(), 256);
    for (int i = 0; i < 4; ++i) CHECK(eig.eigenvalues[static_cast<std::size_t>(i)] < 0.0);
    CHECK(eig.eigenvalues[4] > eig.eigenvalues[3]);
}

TEST_CASE("fci basis enumeration") {
    HubbardSpec small;
    small.lx = 2;
    small.ly = 2;
    small.n_up = 2;
    small.n_dn = 2;
    FciBasis basis = enumerate_fci_basis(small);
    CHECK(basis.dimension() == 36);  // C(4,2)^2

    // The 6 two-electron bitsets over 4 orbitals, ascending.
    const std::uint32_t expected[6] = {0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100};
    REQUIRE(basis.up_dets.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(basis.up_dets[static_cast<std::size_t>(i)] == expected[i]);

    // Bijective index round trip.
    for (long idx = 0; idx < basis.dimension(); ++idx) {
        const std::uint32_t up = basis.up_dets[static_cast<std::size_t>(idx / 6)];
        const std::uint32_t dn = basis.dn_dets[static_cast<std::size_t>(idx % 6)];
        CHECK(basis.index_of(up, dn) == idx);
    }

    HubbardSpec big;  // 4x4, 3 up + 3 dn
    FciBasis large = enumerate_fci_basis(big);
    CHECK(large.up_dets.size() == 560);  // C(16,3)
    CHECK(large.dimension() == 313600);
}

TEST_CASE("hubbard 2x2: matches the brute-force second-quantization oracle") {
    HubbardSpec spec;
    spec.lx = 2;
    spec.ly = 2;
    spec.n_up = 2;
    spec.n_dn = 2;
    spec.t = 1.0;
    spec.u = 0.25 * spec.n_orb();

    SymmetricOperator op = build_hubbard(spec);
    const Matrix built = op.to_dense();
    const Matrix oracle = test::brute_force_hubbard(spec);
    REQUIRE(built.rows == 36);
    CHECK(test::max_abs_diff(built, oracle) <= 1e-14);

    // Hermitian by construction.
    for (int j = 0; j < 36; ++j)
        for (int i = 0; i < 36; ++i) CHECK(built(i, j) == built(j, i));

    // Every off-diagonal entry is +-U/N.
    const double coupling = spec.u / spec.n_orb();
    for (int j = 0; j < 36; ++j)
        for (int i = 0; i < 36; ++i)
            if (i != j && built(i, j) != 0.0)
                CHECK(std::fabs(built(i, j)) == doctest::Approx(coupling));

    // Ground-state energy against dense diagonalization of the oracle.
    SymEigResult ours = sym_eig(built, 64);
    SymEigResult ref = sym_eig(oracle, 64);
    CHECK(std::fabs(ours.eigenvalues[0] - ref.eigenvalues[0]) <= 1e-12);
}

TEST_CASE("hubbard 2x2: total momentum is conserved") {
    HubbardSpec spec;
    spec.lx = 2;
    spec.ly = 2;
    spec.n_up = 2;
    spec.n_dn = 2;
    FciBasis basis = enumerate_fci_basis(spec);
    SymmetricOperator op = build_hubbard(spec);
    const Matrix h = op.to_dense();

    auto total_momentum = [&](std::uint32_t up, std::uint32_t dn) {
        int m1 = 0, m2 = 0;
        for (int o = 0; o < 4; ++o) {
            const int count = static_cast<int>((up >> o) & 1u) + static_cast<int>((dn >> o) & 1u);
            m1 += count * (o % 2);
            m2 += count * (o / 2);
        }
        return std::pair<int, int>{m1 % 2, m2 % 2};
    };

    for (long a = 0; a < 36; ++a)
        for (long b = 0; b < 36; ++b) {
            if (h(static_cast<int>(a), static_cast<int>(b)) == 0.0) continue;
            const auto ka = total_momentum(basis.up_dets[static_cast<std::size_t>(a / 6)],
                                           basis.dn_dets[static_cast<std::size_t>(a % 6)]);
            const auto kb = total_momentum(basis.up_dets[static_cast<std::size_t>(b / 6)],
                                           basis.dn_dets[static_cast<std::size_t>(b % 6)]);
            CHECK(ka == kb);
        }
}

TEST_CASE("hubbard: sparse-mode bound and the matrix-free route") {
    HubbardSpec spec;
    spec.lx = 2;
    spec.ly = 2;
    spec.n_up = 2;
    spec.n_dn = 2;
    CHECK_THROWS_AS(build_hubbard(spec, 10), ConfigError);

    SymmetricOperator mf = build_hubbard_matrix_free(spec);
    SymmetricOperator sp = build_hubbard(spec);
    const Matrix a = mf.to_dense();
    const Matrix b = sp.to_dense();
    CHECK(test::max_abs_diff(a, b) == 0.0);
}

TEST_CASE("generated operators pass the symmetry check") {
    std::vector<SymmetricOperator> ops;
    ops.push_back(build_random({SpectrumFamily::kLogarithm, 30, 2, 0, {}}).op);
    ops.push_back(build_dft({50}));
    {
        HubbardSpec spec;
        spec.lx = 2;
        spec.ly = 2;
        spec.n_up = 1;
        spec.n_dn = 1;
        ops.push_back(build_hubbard(spec));
    }
    Rng rng(9);
    for (const SymmetricOperator& op : ops) {
        const int n = op.dimension();
        const double norm = estimate_norm(op);
        std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n)),
            au(static_cast<std::size_t>(n)), av(static_cast<std::size_t>(n));
        for (int rep = 0; rep < 20; ++rep) {
            for (auto& x : u) x = rng.next_gaussian();
            for (auto& x : v) x = rng.next_gaussian();
            op.apply_column(u.data(), au.data());
            op.apply_column(v.data(), av.data());
            CHECK(std::fabs(dot(u.data(), av.data(), n) - dot(v.data(), au.data(), n)) <=
                  1e-12 * norm * norm2(u.data(), n) * norm2(v.data(), n));
        }
    }
}

TEST_CASE("hubbard: diagonal_entry matches the assembled rows") {
    HubbardSpec spec;
    spec.lx = 2;
    spec.ly = 2;
    spec.n_up = 2;
    spec.n_dn = 1;
    HubbardHamiltonian h(spec);
    for (long i = 0; i < h.dimension(); ++i)
        CHECK(h.diagonal_entry(i) == h.row(i).diagonal);
}
