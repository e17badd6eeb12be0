#include "triofm/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "triofm/small_eig.hpp"

namespace triofm {

namespace {

/// Nuclear norm of a small square matrix: sum of singular values, computed
/// from the eigenvalues of M^T M.
double nuclear_norm(const Matrix& m) {
    const Matrix mtm = matmul_tn(m, m);
    SymEigResult eig = sym_eig(mtm, std::max(64, m.rows));
    double s = 0.0;
    for (double v : eig.eigenvalues) s += std::sqrt(std::max(0.0, v));
    return s;
}

}  // namespace

double e_vec(const Matrix& x, const ReferenceEigen& ref, Objective objective) {
    const int p = x.cols;
    if (p > ref.count()) throw DimensionError("e_vec: more columns than reference eigenpairs");
    const int n = x.rows;

    double dist2 = 0.0;
    double target2 = 0.0;
    for (const auto& group : ref.degeneracy_groups) {
        if (group.front() >= p) break;
        std::vector<int> cols(group.begin(),
                              std::find_if(group.begin(), group.end(),
                                           [p](int c) { return c >= p; }));
        // Minimizer columns B = scaled eigenvectors of this group.
        Matrix b(n, static_cast<int>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const double lambda = ref.eigenvalues[static_cast<std::size_t>(cols[k])];
            const double scale =
                objective == Objective::kObj1 ? std::sqrt(std::max(0.0, -lambda)) : 1.0;
            const double* u = ref.vectors.col(cols[k]);
            double* bk = b.col(static_cast<int>(k));
            for (int i = 0; i < n; ++i) bk[i] = scale * u[i];
        }
        Matrix xg(n, static_cast<int>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k)
            std::copy(x.col(cols[k]), x.col(cols[k]) + n, xg.col(static_cast<int>(k)));

        const double xg2 = frobenius_norm(xg);
        const double b2 = frobenius_norm(b);
        target2 += b2 * b2;
        if (cols.size() == 1) {
            // Sign choice only; direct differences avoid the cancellation of
            // the expanded form near zero distance.
            double plus = 0.0, minus = 0.0;
            for (int i = 0; i < n; ++i) {
                const double dp = xg(i, 0) - b(i, 0);
                const double dm = xg(i, 0) + b(i, 0);
                plus += dp * dp;
                minus += dm * dm;
            }
            dist2 += std::min(plus, minus);
        } else {
            // Orthogonal alignment inside the degenerate subspace:
            // min_Q ||X_g - B Q||_F^2 = ||X_g||^2 + ||B||^2 - 2 ||B^T X_g||_*.
            const Matrix cross = matmul_tn(b, xg);
            dist2 += std::max(0.0, xg2 * xg2 + b2 * b2 - 2.0 * nuclear_norm(cross));
        }
    }
    if (target2 == 0.0) throw SingularError("e_vec: reference minimizer has zero norm");
    return std::sqrt(std::max(0.0, dist2)) / std::sqrt(target2);
}

double e_val_from_products(const Matrix& x, const Matrix& ax, const ReferenceEigen& ref) {
    const int p = x.cols;
    if (p > ref.count()) throw DimensionError("e_val: more columns than reference eigenvalues");
    const Matrix b = matmul_tn(x, x);
    const Matrix s = matmul_tn(x, ax);
    // trace(B^{-1} S) through the generalized eigensolve: the trace of the
    // generalized eigenvalues.
    GenEigResult ge = gen_eig(s, b, std::max(64, p));
    double t = 0.0;
    for (double v : ge.eigenvalues) t += v;
    double target = 0.0;
    for (int i = 0; i < p; ++i) target += ref.eigenvalues[static_cast<std::size_t>(i)];
    if (target == 0.0) throw SingularError("e_val: reference eigenvalue sum is zero");
    return std::fabs(t - target) / std::fabs(target);
}

double e_val(const SymmetricOperator& a, const Matrix& x, const ReferenceEigen& ref) {
    Matrix ax(x.rows, x.cols);
    apply_block(a, x, nullptr, ax);
    return e_val_from_products(x, ax, ref);
}

long nnz_thresholded(const Matrix& x, double threshold) {
    long count = 0;
    for (double v : x.data)
        if (std::fabs(v) > threshold) ++count;
    return count;
}

RateFit fit_rate(const ConvergenceTrace& trace, int column, double epsilon) {
    std::vector<std::pair<long, double>> series;  // (iteration, err)
    for (const TraceRow& row : trace.rows)
        if (row.col_index == column && std::isfinite(row.err_norm) && !row.locked)
            series.emplace_back(row.iteration, row.err_norm);
    if (series.empty()) throw ConfigError("fit_rate: trace has no error data for the column");

    const double low = 10.0 * epsilon;
    const double high = 1e-4;
    // Trailing contiguous run, scanning backwards: strictly decreasing and
    // inside the window.
    std::size_t end = series.size();
    while (end > 0 && !(series[end - 1].second >= low && series[end - 1].second <= high)) --end;
    std::size_t begin = end;
    while (begin > 0) {
        const auto& cur = series[begin - 1];
        if (!(cur.second >= low && cur.second <= high)) break;
        if (begin < end && cur.second <= series[begin].second) break;
        --begin;
    }
    const int count = static_cast<int>(end - begin);
    if (count < 20)
        throw ConfigError("fit_rate: only " + std::to_string(count) +
                          " usable rows in the linear window (need 20)");

    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        const double tt = static_cast<double>(series[k].first);
        const double yy = std::log(series[k].second);
        st += tt;
        sy += yy;
        stt += tt * tt;
        sty += tt * yy;
    }
    const double m = count;
    const double slope = (m * sty - st * sy) / (m * stt - st * st);

    RateFit fit;
    fit.rate = std::exp(slope);
    fit.rows_used = count;
    fit.first_iteration = series[begin].first;
    fit.last_iteration = series[end - 1].first;
    return fit;
}

}  // namespace triofm
