#include "triofm/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>

#include "triofm/small_eig.hpp"

namespace triofm {

std::vector<double> spectrum_values(const SpectrumSpec& spec) {
    if (spec.n < 1) throw ConfigError("spectrum: n must be positive");
    std::vector<double> v(static_cast<std::size_t>(spec.n));
    switch (spec.family) {
        case SpectrumFamily::kUniform: {
            const double denom = spec.uniform_scale_n > 0 ? spec.uniform_scale_n : 500.0;
            for (int i = 1; i <= spec.n; ++i)
                v[static_cast<std::size_t>(i - 1)] = (i - 1) / denom - 1.0;
            break;
        }
        case SpectrumFamily::kLogarithm: {
            const double c = 1024.0 / 500.0;
            for (int i = 1; i <= spec.n; ++i)
                v[static_cast<std::size_t>(i - 1)] = -c * std::pow(2.0, -i);
            break;
        }
        case SpectrumFamily::kUshape: {
            const double head[5] = {-14.0 / 16.0, -10.0 / 16.0, -8.0 / 16.0, -7.0 / 16.0,
                                    -5.0 / 16.0};
            for (int i = 0; i < spec.n; ++i)
                v[static_cast<std::size_t>(i)] = i < 5 ? head[i] : -1.0 / 16.0;
            break;
        }
        case SpectrumFamily::kExplicit: {
            if (static_cast<int>(spec.explicit_values.size()) != spec.n)
                throw ConfigError("spectrum: explicit list length must equal n");
            v = spec.explicit_values;
            break;
        }
    }
    std::sort(v.begin(), v.end());
    for (double x : v)
        if (!std::isfinite(x)) throw ConfigError("spectrum: eigenvalues must be finite");
    return v;
}

RandomMatrixProblem build_random(const SpectrumSpec& spec) {
    const std::vector<double> lambda = spectrum_values(spec);
    const int n = spec.n;
    Matrix q = random_orthogonal(n, spec.seed);

    Matrix scaled = q;
    for (int j = 0; j < n; ++j) {
        double* c = scaled.col(j);
        for (int i = 0; i < n; ++i) c[i] *= lambda[static_cast<std::size_t>(j)];
    }
    Matrix a = matmul(scaled, transpose(q));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = v;
        }

    double rho = 0.0;
    for (double l : lambda) rho = std::max(rho, std::fabs(l));

    SymmetricOperator op = SymmetricOperator::dense(std::move(a));
    op.set_norm_estimate(rho);
    ReferenceEigen ref = ReferenceEigen::create(lambda, std::move(q), 1e-10 * rho);
    return {std::move(op), std::move(ref)};
}

double dft_potential(const DftSpec&, double x) {
    double v = 0.0;
    const double sigma = 0.03;
    for (int i = 1; i <= 4; ++i) {
        const double center = (2.0 * i - 1.0) / 8.0;
        const double depth = 850.0 + 50.0 * (i % 4);
        const double d = x - center;
        v -= depth * std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return v;
}

SymmetricOperator build_dft(const DftSpec& spec) {
    const int n = spec.grid_points;
    if (n < 3) throw ConfigError("dft: grid needs at least 3 points");
    const double h = 1.0 / n;
    const double kinetic = 0.02 / (h * h);  // -kappa u'' with kappa = 0.02

    // Second-order central difference stencil with periodic wrap. The kinetic
    // coefficient is tuned so each of the four wells binds exactly one of the
    // four lowest states and the inter-well tails fall below the 1e-5
    // sparsity threshold; both properties are what the eigenvector-sparsity
    // comparisons measure.
    std::vector<int> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> values;
    col_idx.reserve(static_cast<std::size_t>(3) * n);
    values.reserve(static_cast<std::size_t>(3) * n);
    for (int j = 0; j < n; ++j) {
        const int left = (j + n - 1) % n;
        const int right = (j + 1) % n;
        // Entries in ascending column order for a fixed row.
        int cols[3] = {left, j, right};
        double vals[3] = {-kinetic, 2.0 * kinetic + dft_potential(spec, j * h), -kinetic};
        int order[3] = {0, 1, 2};
        std::sort(order, order + 3, [&](int a, int b) { return cols[a] < cols[b]; });
        for (int k : order) {
            col_idx.push_back(cols[k]);
            values.push_back(vals[k]);
        }
        row_ptr[static_cast<std::size_t>(j) + 1] = static_cast<int>(col_idx.size());
    }
    SymmetricOperator op = SymmetricOperator::csr(n, std::move(row_ptr), std::move(col_idx),
                                                  std::move(values));
    op.set_norm_estimate(estimate_norm(op));
    return op;
}

namespace {

int popcount_below(std::uint32_t bits, int orbital) {
    const std::uint32_t mask = (orbital == 0) ? 0u : ((1u << orbital) - 1u);
    return std::popcount(bits & mask);
}

}  // namespace

long FciBasis::index_of(std::uint32_t up, std::uint32_t dn) const {
    const auto up_it = std::lower_bound(up_dets.begin(), up_dets.end(), up);
    const auto dn_it = std::lower_bound(dn_dets.begin(), dn_dets.end(), dn);
    if (up_it == up_dets.end() || *up_it != up || dn_it == dn_dets.end() || *dn_it != dn)
        throw DimensionError("fci basis: determinant not in basis");
    return static_cast<long>(up_it - up_dets.begin()) * static_cast<long>(dn_dets.size()) +
           static_cast<long>(dn_it - dn_dets.begin());
}

FciBasis enumerate_fci_basis(const HubbardSpec& spec) {
    const int n_orb = spec.n_orb();
    if (n_orb < 1 || n_orb > 30) throw ConfigError("fci basis: orbital count out of range");
    if (spec.n_up < 0 || spec.n_up > n_orb || spec.n_dn < 0 || spec.n_dn > n_orb)
        throw ConfigError("fci basis: electron counts out of range");
    FciBasis basis;
    basis.n_orb = n_orb;
    basis.n_up = spec.n_up;
    basis.n_dn = spec.n_dn;
    const std::uint32_t limit = 1u << n_orb;
    for (std::uint32_t bits = 0; bits < limit; ++bits) {
        const int count = std::popcount(bits);
        if (count == spec.n_up) basis.up_dets.push_back(bits);
        if (count == spec.n_dn) basis.dn_dets.push_back(bits);
    }
    return basis;
}

HubbardHamiltonian::HubbardHamiltonian(HubbardSpec spec)
    : spec_(spec), basis_(enumerate_fci_basis(spec)) {
    const int n_orb = spec_.n_orb();
    dispersion_.resize(static_cast<std::size_t>(n_orb));
    for (int o = 0; o < n_orb; ++o) dispersion_[static_cast<std::size_t>(o)] = dispersion(o);
}

double HubbardHamiltonian::dispersion(int orbital) const {
    const int m1 = orbital % spec_.lx;
    const int m2 = orbital / spec_.lx;
    const double k1 = 2.0 * 3.141592653589793238462643383279503 * m1 / spec_.lx;
    const double k2 = 2.0 * 3.141592653589793238462643383279503 * m2 / spec_.ly;
    return -2.0 * spec_.t * (std::cos(k1) + std::cos(k2));
}

double HubbardHamiltonian::diagonal_entry(long index) const {
    const long dn_count = static_cast<long>(basis_.dn_dets.size());
    const std::uint32_t up = basis_.up_dets[static_cast<std::size_t>(index / dn_count)];
    const std::uint32_t dn = basis_.dn_dets[static_cast<std::size_t>(index % dn_count)];
    double value = 0.0;
    for (int o = 0; o < spec_.n_orb(); ++o) {
        if (up & (1u << o)) value += dispersion_[static_cast<std::size_t>(o)];
        if (dn & (1u << o)) value += dispersion_[static_cast<std::size_t>(o)];
    }
    return value + (spec_.u / spec_.n_orb()) * spec_.n_up * spec_.n_dn;  // zero-transfer part
}

HubbardRow HubbardHamiltonian::row(long index) const {
    const long dn_count = static_cast<long>(basis_.dn_dets.size());
    const std::uint32_t up = basis_.up_dets[static_cast<std::size_t>(index / dn_count)];
    const std::uint32_t dn = basis_.dn_dets[static_cast<std::size_t>(index % dn_count)];
    const int n_orb = spec_.n_orb();
    const double coupling = spec_.u / n_orb;

    HubbardRow out;
    out.diagonal = diagonal_entry(index);

    // Scattering p(up) -> p-q, k(dn) -> k+q for every nonzero momentum
    // transfer q; each reachable determinant appears exactly once.
    for (int p_orb = 0; p_orb < n_orb; ++p_orb) {
        if (!(up & (1u << p_orb))) continue;
        const int pm1 = p_orb % spec_.lx, pm2 = p_orb / spec_.lx;
        for (int k_orb = 0; k_orb < n_orb; ++k_orb) {
            if (!(dn & (1u << k_orb))) continue;
            const int km1 = k_orb % spec_.lx, km2 = k_orb / spec_.lx;
            for (int q_orb = 1; q_orb < n_orb; ++q_orb) {
                const int qm1 = q_orb % spec_.lx, qm2 = q_orb / spec_.lx;
                const int p_new = (pm1 - qm1 + spec_.lx) % spec_.lx +
                                  spec_.lx * ((pm2 - qm2 + spec_.ly) % spec_.ly);
                const int k_new = (km1 + qm1) % spec_.lx + spec_.lx * ((km2 + qm2) % spec_.ly);
                if (up & (1u << p_new)) continue;
                if (dn & (1u << k_new)) continue;
                const std::uint32_t up_new = (up & ~(1u << p_orb)) | (1u << p_new);
                const std::uint32_t dn_new = (dn & ~(1u << k_orb)) | (1u << k_new);
                const int parity = popcount_below(up, p_orb) +
                                   popcount_below(up & ~(1u << p_orb), p_new) +
                                   popcount_below(dn, k_orb) +
                                   popcount_below(dn & ~(1u << k_orb), k_new);
                const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
                out.off_diagonal.emplace_back(basis_.index_of(up_new, dn_new), sign * coupling);
            }
        }
    }
    std::sort(out.off_diagonal.begin(), out.off_diagonal.end());
    return out;
}

SymmetricOperator build_hubbard(const HubbardSpec& spec, long max_sparse_dim) {
    HubbardHamiltonian h(spec);
    const long dim = h.dimension();
    if (dim > max_sparse_dim)
        throw ConfigError("hubbard: basis dimension " + std::to_string(dim) +
                          " exceeds the sparse-mode bound; use the matrix-free builder");
    std::vector<int> row_ptr(static_cast<std::size_t>(dim) + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> values;
    for (long i = 0; i < dim; ++i) {
        HubbardRow row = h.row(i);
        bool diagonal_written = false;
        for (const auto& [col, val] : row.off_diagonal) {
            if (!diagonal_written && col > i) {
                col_idx.push_back(static_cast<int>(i));
                values.push_back(row.diagonal);
                diagonal_written = true;
            }
            col_idx.push_back(static_cast<int>(col));
            values.push_back(val);
        }
        if (!diagonal_written) {
            col_idx.push_back(static_cast<int>(i));
            values.push_back(row.diagonal);
        }
        row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<int>(col_idx.size());
    }
    return SymmetricOperator::csr(static_cast<int>(dim), std::move(row_ptr), std::move(col_idx),
                                  std::move(values));
}

SymmetricOperator build_hubbard_matrix_free(const HubbardSpec& spec) {
    auto h = std::make_shared<HubbardHamiltonian>(spec);
    const long dim = h->dimension();
    std::vector<double> diag(static_cast<std::size_t>(dim));
    for (long i = 0; i < dim; ++i) diag[static_cast<std::size_t>(i)] = h->diagonal_entry(i);
    auto diag_shared = std::make_shared<std::vector<double>>(std::move(diag));
    return SymmetricOperator::procedural(
        static_cast<int>(dim), [h, diag_shared, dim](const double* x, double* y) {
            for (long i = 0; i < dim; ++i)
                y[i] = (*diag_shared)[static_cast<std::size_t>(i)] * x[i];
            for (long i = 0; i < dim; ++i) {
                const HubbardRow row = h->row(i);
                double acc = 0.0;
                for (const auto& [col, val] : row.off_diagonal) acc += val * x[col];
                y[i] += acc;
            }
        });
}

}  // namespace triofm
