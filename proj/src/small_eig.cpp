#include "triofm/small_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "triofm/rng.hpp"

namespace triofm {

Matrix triu(const Matrix& m) {
    Matrix t(m.rows, m.cols);
    for (int j = 0; j < m.cols; ++j)
        for (int i = 0; i <= std::min(j, m.rows - 1); ++i) t(i, j) = m(i, j);
    return t;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j)
        for (int i = 0; i < a.rows; ++i)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

void sort_ascending(SymEigResult& r) {
    const int n = static_cast<int>(r.eigenvalues.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return r.eigenvalues[static_cast<std::size_t>(a)] <
                                                r.eigenvalues[static_cast<std::size_t>(b)]; });
    std::vector<double> ev(static_cast<std::size_t>(n));
    Matrix vecs(r.vectors.rows, n);
    for (int k = 0; k < n; ++k) {
        ev[static_cast<std::size_t>(k)] = r.eigenvalues[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        std::copy(r.vectors.col(order[static_cast<std::size_t>(k)]),
                  r.vectors.col(order[static_cast<std::size_t>(k)]) + r.vectors.rows, vecs.col(k));
    }
    r.eigenvalues = std::move(ev);
    r.vectors = std::move(vecs);
}

}  // namespace

SymEigResult sym_eig(const Matrix& m, int max_dim) {
    if (m.rows != m.cols) throw DimensionError("sym_eig: matrix must be square");
    const int n = m.rows;
    if (n > max_dim)
        throw DimensionError("sym_eig: dimension " + std::to_string(n) +
                             " above configured bound " + std::to_string(max_dim));
    Matrix a = m;
    // Symmetrize once; inputs are symmetric to working precision by contract.
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = v;
        }
    Matrix v = Matrix::identity(n);
    double norm = frobenius_norm(a);
    if (norm == 0.0) return {std::vector<double>(static_cast<std::size_t>(n), 0.0), std::move(v)};

    const double tol = 1e-15 * norm;
    const int max_sweeps = 60;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- J^T A J on rows/cols p, q.
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps && off_diagonal_norm(a) > tol * 100)
        throw IterationError("sym_eig: Jacobi sweeps did not converge", sweep);

    SymEigResult r;
    r.eigenvalues.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) r.eigenvalues[static_cast<std::size_t>(i)] = a(i, i);
    r.vectors = std::move(v);
    sort_ascending(r);
    return r;
}

Matrix cholesky_lower(const Matrix& b, double rel_tol) {
    if (b.rows != b.cols) throw DimensionError("cholesky: matrix must be square");
    const int n = b.rows;
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm = std::max(norm, std::fabs(b(i, i)));
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = b(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > rel_tol * norm))
            throw SingularError("cholesky: matrix numerically not positive definite");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = b(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

GenEigResult gen_eig(const Matrix& s, const Matrix& b, int max_dim) {
    if (s.rows != s.cols || b.rows != b.cols || s.rows != b.rows)
        throw DimensionError("gen_eig: matrices must be square and same size");
    const int n = s.rows;
    const Matrix l = cholesky_lower(b);

    // C = L^{-1} S L^{-T}, formed by two triangular solves.
    Matrix c = s;
    for (int j = 0; j < n; ++j) {  // forward solve L Y = S (per column)
        double* cj = c.col(j);
        for (int i = 0; i < n; ++i) {
            double v = cj[i];
            for (int k = 0; k < i; ++k) v -= l(i, k) * cj[k];
            cj[i] = v / l(i, i);
        }
    }
    for (int i = 0; i < n; ++i) {  // per row: solve L Z^T = Y^T
        for (int j = 0; j < n; ++j) {
            double v = c(i, j);
            for (int k = 0; k < j; ++k) v -= l(j, k) * c(i, k);
            c(i, j) = v / l(j, j);
        }
    }

    SymEigResult se = sym_eig(c, max_dim);

    // Back-substitute Q = L^{-T} Z, so Q^T B Q = I.
    Matrix q = std::move(se.vectors);
    for (int j = 0; j < q.cols; ++j) {
        double* qj = q.col(j);
        for (int i = n - 1; i >= 0; --i) {
            double v = qj[i];
            for (int k = i + 1; k < n; ++k) v -= l(k, i) * qj[k];
            qj[i] = v / l(i, i);
        }
    }
    return {std::move(se.eigenvalues), std::move(q)};
}

Matrix random_orthogonal(int n, std::uint64_t seed) {
    if (n < 1) throw DimensionError("random_orthogonal: n must be positive");
    Rng rng(seed);
    Matrix a(n, n);
    for (int j = 0; j < n; ++j) {
        double* c = a.col(j);
        for (int i = 0; i < n; ++i) c[i] = rng.next_gaussian();
    }

    // Householder QR, accumulating the reflectors into Q afterwards.
    std::vector<double> tau(static_cast<std::size_t>(n), 0.0);
    std::vector<double> rdiag(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        double* ck = a.col(k);
        const double xnorm = norm2(ck + k, n - k);
        if (xnorm == 0.0) {
            rdiag[static_cast<std::size_t>(k)] = 0.0;
            continue;
        }
        const double alpha = ck[k] >= 0.0 ? -xnorm : xnorm;
        const double v0 = ck[k] - alpha;
        ck[k] = v0;
        rdiag[static_cast<std::size_t>(k)] = alpha;
        const double vnorm2 = dot(ck + k, ck + k, n - k);
        tau[static_cast<std::size_t>(k)] = vnorm2 > 0.0 ? 2.0 / vnorm2 : 0.0;
        for (int j = k + 1; j < n; ++j) {
            double* cj = a.col(j);
            const double w = tau[static_cast<std::size_t>(k)] * dot(ck + k, cj + k, n - k);
            axpy(-w, ck + k, cj + k, n - k);
        }
    }
    Matrix q = Matrix::identity(n);
    for (int k = n - 1; k >= 0; --k) {
        const double* vk = a.col(k);
        const double tk = tau[static_cast<std::size_t>(k)];
        if (tk == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            double* qj = q.col(j);
            const double w = tk * dot(vk + k, qj + k, n - k);
            axpy(-w, vk + k, qj + k, n - k);
        }
    }
    // Fix the gauge: R diagonal positive, then a nonnegative Q diagonal.
    // Column sign flips cancel in A = Q diag(l) Q^T, so the convention only
    // pins a canonical representative per seed.
    for (int k = 0; k < n; ++k)
        if (rdiag[static_cast<std::size_t>(k)] < 0.0)
            for (int i = 0; i < n; ++i) q(i, k) = -q(i, k);
    for (int k = 0; k < n; ++k)
        if (q(k, k) < 0.0)
            for (int i = 0; i < n; ++i) q(i, k) = -q(i, k);
    return q;
}

}  // namespace triofm
