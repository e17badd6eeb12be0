#include "triofm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triofm/small_eig.hpp"

namespace triofm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double column_error(const double* x, const ReferenceEigen& ref, int col, Objective objective,
                    int n) {
    if (col >= ref.count()) return kNaN;
    const double lambda = ref.eigenvalues[static_cast<std::size_t>(col)];
    const double scale = objective == Objective::kObj1 ? std::sqrt(std::max(0.0, -lambda)) : 1.0;
    const double* u = ref.vectors.col(col);
    double plus = 0.0, minus = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d1 = x[i] - scale * u[i];
        const double d2 = x[i] + scale * u[i];
        plus += d1 * d1;
        minus += d2 * d2;
    }
    return std::sqrt(std::min(plus, minus));
}

}  // namespace

RayleighRitz rayleigh_ritz(const Matrix& x, const Matrix& ax) {
    const Matrix b = matmul_tn(x, x);
    const Matrix s = matmul_tn(x, ax);
    GenEigResult ge = gen_eig(s, b, std::max(64, x.cols));
    const Matrix xq = matmul(x, ge.vectors);
    const Matrix axq = matmul(ax, ge.vectors);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < x.cols; ++j) {
        const double lj = ge.eigenvalues[static_cast<std::size_t>(j)];
        for (int i = 0; i < x.rows; ++i) {
            const double r = axq(i, j) - xq(i, j) * lj;
            num += r * r;
            den += axq(i, j) * axq(i, j);
        }
    }
    RayleighRitz out;
    if (den > 0.0)
        out.residual = std::sqrt(num / den);
    else
        out.residual = den == 0.0 ? 0.0 : kNaN;  // NaN data stays NaN
    out.ritz_values = std::move(ge.eigenvalues);
    out.q = std::move(ge.vectors);
    return out;
}

RayleighRitz rayleigh_ritz_residual(const SymmetricOperator& a, BlockVector& x) {
    const Matrix ax = apply_operator(a, x, false);
    return rayleigh_ritz(x.values, ax);
}

bool check_lock(int col, double g_norm, double ax_norm, Objective objective, double epsilon,
                const std::vector<bool>& locked) {
    for (int j = 0; j < col; ++j)
        if (!locked[static_cast<std::size_t>(j)]) return false;
    const double weight =
        objective == Objective::kObj1 ? std::cbrt(ax_norm) : ax_norm;
    return g_norm * weight < epsilon;
}

double error_propagation_factor(const std::vector<double>& spectrum, double alpha, int i, int j) {
    const double li = spectrum[static_cast<std::size_t>(i - 1)];
    const double lj = spectrum[static_cast<std::size_t>(j - 1)];
    if (j == i) return 1.0 + 2.0 * alpha * li;
    return 1.0 + alpha * (lj - li);
}

Matrix error_propagation_step(const std::vector<double>& spectrum, double alpha, const Matrix& e) {
    const int n = e.rows;
    const int p = e.cols;
    if (static_cast<int>(spectrum.size()) < n)
        throw DimensionError("error propagation: spectrum shorter than component count");
    Matrix out(n, p);
    for (int i = 0; i < p; ++i) {
        const double li = spectrum[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            const double lj = spectrum[static_cast<std::size_t>(j)];
            if (j < i) {
                // Coupled to the mirror component of the earlier column.
                out(j, i) = (1.0 + alpha * li) * e(j, i) -
                            alpha * std::sqrt(lj * li) * e(i, j);
            } else if (j == i) {
                out(j, i) = (1.0 + 2.0 * alpha * li) * e(j, i);
            } else {
                out(j, i) = (1.0 + alpha * (lj - li)) * e(j, i);
            }
        }
    }
    return out;
}

SolveResult solve(const SymmetricOperator& a, BlockVector x0, const SolverConfig& config,
                  const ReferenceEigen* reference, const TraceCallback& callback) {
    const int n = x0.n();
    const int p = x0.p();
    if (a.dimension() != n)
        throw DimensionError("solve: operator dimension does not match the initial block");
    if (!(config.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (config.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");

    const DirectionKind kind{config.objective, config.triangularized};
    const bool locking = config.locking_enabled && config.triangularized;

    SolveResult result;
    result.x = std::move(x0);
    Matrix& x = result.x.values;
    std::vector<bool>& locked = result.x.locked;

    double rho = a.norm_estimate().value_or(0.0);
    if (rho <= 0.0) rho = estimate_norm(a);
    const double divergence_radius = config.divergence_factor * std::sqrt(rho * p);

    std::optional<double> alpha_fixed;
    if (config.stepsize.kind == StepsizeKind::kFixed)
        alpha_fixed = fixed_stepsize(config.stepsize.alpha, rho);

    // The columnwise stepsize strategy belongs to the triangularized schemes;
    // the non-triangularized baselines move every column by one full-block
    // exact stepsize (per-column sub-block roots would ignore the coupling
    // their direction carries from later columns).
    StepsizeKind stepsize_kind = config.stepsize.kind;
    if (!config.triangularized && stepsize_kind == StepsizeKind::kExactColumnwise)
        stepsize_kind = StepsizeKind::kExactFull;

    AccelState accel;
    accel.kind = config.acceleration;
    accel.beta = config.resolved_momentum_beta();
    accel.pr_plus_clamp = config.pr_plus_clamp;
    accel.reset(n, p);

    long accesses = 0;

    Matrix ax(n, p);
    accesses += apply_block(a, x, locking ? &locked : nullptr, ax);

    Matrix g(n, p), w(n, p), aw(n, p), momentum_dir(n, p);
    LinesearchGrams grams;
    std::vector<double> g_norms(static_cast<std::size_t>(p), 0.0);
    std::vector<double> err_norms(static_cast<std::size_t>(p), kNaN);
    std::vector<double> alphas(static_cast<std::size_t>(p), 0.0);
    double residual = kNaN;

    const bool need_residual =
        config.stopping == Stopping::kResidual || config.stopping == Stopping::kEither;

    auto emit_rows = [&](long iteration) {
        if (!config.record_trace && !callback) return;
        for (int i = 0; i < p; ++i) {
            TraceRow row;
            row.iteration = iteration;
            row.col_index = i + 1;
            row.g_norm = g_norms[static_cast<std::size_t>(i)];
            row.err_norm = err_norms[static_cast<std::size_t>(i)];
            row.alpha = alphas[static_cast<std::size_t>(i)];
            row.locked = locked[static_cast<std::size_t>(i)];
            row.cum_col_access = accesses;
            row.residual = residual;
            if (config.record_trace) result.trace.rows.push_back(row);
            if (callback) callback(row);
        }
    };

    bool converged = false;
    long t = 0;
    while (t < config.max_iterations) {
        ++t;
        residual = kNaN;
        std::fill(alphas.begin(), alphas.end(), 0.0);

        // Direction field. Locked columns are frozen: under the triangularized
        // schemes their direction value no longer changes, so the stored
        // entries stay valid.
        direction_from_products(kind, x, ax, locking ? &locked : nullptr, g);
        for (int i = 0; i < p; ++i) {
            if (locking && locked[static_cast<std::size_t>(i)]) continue;
            g_norms[static_cast<std::size_t>(i)] = norm2(g.col(i), n);
            if (!std::isfinite(g_norms[static_cast<std::size_t>(i)])) {
                result.iterations = t;
                result.column_accesses = accesses;
                throw DivergenceError(
                    "solve: non-finite direction at iteration " + std::to_string(t), t, accesses);
            }
            if (reference)
                err_norms[static_cast<std::size_t>(i)] =
                    column_error(x.col(i), *reference, i, config.objective, n);
        }

        if (config.objective == Objective::kObj2 && !result.positive_ritz_warning &&
            detect_positive_ritz(x, ax))
            result.positive_ritz_warning = true;

        // Locking pass: columns lock in order, several per iteration allowed.
        if (locking) {
            for (int i = result.x.locked_prefix(); i < p; ++i) {
                const double ax_norm = norm2(ax.col(i), n);
                if (!check_lock(i, g_norms[static_cast<std::size_t>(i)], ax_norm,
                                config.objective, config.tolerance, locked))
                    break;
                locked[static_cast<std::size_t>(i)] = true;
                result.trace.lock_events.push_back({t, i + 1});
            }
        }

        if (locking && result.x.locked_prefix() == p) {
            converged = true;
            emit_rows(t);
            break;
        }

        if (config.stopping == Stopping::kDirectionNorm) {
            double total = 0.0;
            for (double gn : g_norms) total += gn * gn;
            if (std::sqrt(total) < config.tolerance) {
                converged = true;
                emit_rows(t);
                break;
            }
        }

        if (need_residual && (t - 1) % config.residual_check_interval == 0) {
            try {
                RayleighRitz rr = rayleigh_ritz(x, ax);
                residual = rr.residual;
            } catch (const SingularError&) {
                residual = kNaN;  // rank-deficient iterate; direction norms still apply
            }
            if (std::isfinite(residual) && residual < config.tolerance &&
                config.stopping != Stopping::kDirectionNorm) {
                converged = true;
                emit_rows(t);
                break;
            }
        }

        // Step direction.
        switch (config.acceleration) {
            case Acceleration::kNone:
                for (int i = 0; i < p; ++i) {
                    if (locking && locked[static_cast<std::size_t>(i)]) continue;
                    const double* gi = g.col(i);
                    double* wi = w.col(i);
                    for (int r = 0; r < n; ++r) wi[r] = -gi[r];
                }
                break;
            case Acceleration::kMomentum:
                momentum_update(g, accel, accel.beta, locking ? &locked : nullptr, momentum_dir);
                for (int i = 0; i < p; ++i) {
                    if (locking && locked[static_cast<std::size_t>(i)]) continue;
                    const double* mi = momentum_dir.col(i);
                    double* wi = w.col(i);
                    for (int r = 0; r < n; ++r) wi[r] = -mi[r];
                }
                break;
            case Acceleration::kCgColumnwise:
                if (config.triangularized)
                    cg_direction_update(g, accel, locking ? &locked : nullptr, w);
                else
                    cg_direction_update_block(g, accel, w);
                break;
        }
        for (int i = 0; i < p; ++i)
            if (locking && locked[static_cast<std::size_t>(i)])
                std::fill(w.col(i), w.col(i) + n, 0.0);

        accesses += apply_block(a, w, locking ? &locked : nullptr, aw);

        // Stepsizes.
        if (stepsize_kind == StepsizeKind::kFixed) {
            for (int i = 0; i < p; ++i)
                if (!(locking && locked[static_cast<std::size_t>(i)]))
                    alphas[static_cast<std::size_t>(i)] = *alpha_fixed;
        } else {
            compute_linesearch_grams(x, w, ax, aw, grams);
            const auto polys = columnwise_linesearch_polys(
                config.objective, config.triangularized, config.stepsize.equation, grams);
            if (stepsize_kind == StepsizeKind::kExactFull) {
                double alpha = 0.0;
                try {
                    alpha = solve_cubic_select(polys.back());
                } catch (const Error&) {
                    alpha = 0.0;  // vanished polynomial: nothing left to move
                }
                for (int i = 0; i < p; ++i)
                    if (!(locking && locked[static_cast<std::size_t>(i)]))
                        alphas[static_cast<std::size_t>(i)] = alpha;
            } else {
                for (int i = 0; i < p; ++i) {
                    if (locking && locked[static_cast<std::size_t>(i)]) continue;
                    try {
                        alphas[static_cast<std::size_t>(i)] =
                            solve_cubic_select(polys[static_cast<std::size_t>(i)]);
                    } catch (const Error&) {
                        alphas[static_cast<std::size_t>(i)] = 0.0;
                    }
                }
            }
        }

        // Commit the step; AX follows incrementally so the single operator
        // application per iteration (to W) keeps the cache exact.
        for (int i = 0; i < p; ++i) {
            if (locking && locked[static_cast<std::size_t>(i)]) continue;
            const double ai = alphas[static_cast<std::size_t>(i)];
            if (ai != 0.0) {
                axpy(ai, w.col(i), x.col(i), n);
                axpy(ai, aw.col(i), ax.col(i), n);
            }
        }

        double xnorm = frobenius_norm(x);
        if (!std::isfinite(xnorm) || xnorm > divergence_radius) {
            result.iterations = t;
            result.column_accesses = accesses;
            emit_rows(t);
            throw DivergenceError("solve: iterate diverged at iteration " + std::to_string(t), t,
                                  accesses);
        }

        emit_rows(t);
    }

    result.iterations = t;
    result.column_accesses = accesses;
    result.converged = converged;
    result.final_residual = residual;
    try {
        RayleighRitz rr = rayleigh_ritz(x, ax);
        result.ritz_values = std::move(rr.ritz_values);
        if (!std::isfinite(residual)) result.final_residual = rr.residual;
    } catch (const SingularError&) {
        // Rank-deficient final iterate (for instance zero columns when the
        // operator has fewer negative eigenvalues than columns).
    }
    return result;
}

}  // namespace triofm
