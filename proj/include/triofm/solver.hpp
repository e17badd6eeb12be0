#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "triofm/acceleration.hpp"
#include "triofm/block_vector.hpp"
#include "triofm/directions.hpp"
#include "triofm/linesearch.hpp"
#include "triofm/operator.hpp"
#include "triofm/reference.hpp"

namespace triofm {

enum class Stopping { kDirectionNorm, kResidual, kEither };

struct SolverConfig {
    Objective objective = Objective::kObj1;
    bool triangularized = true;
    StepsizeStrategy stepsize;
    Acceleration acceleration = Acceleration::kCgColumnwise;
    /// Momentum discount; empty picks the objective default (0.9 for the
    /// residual objective, 0.95 for the orbital one).
    std::optional<double> momentum_beta;
    bool pr_plus_clamp = false;
    double tolerance = 1e-8;
    long max_iterations = 200000;
    bool locking_enabled = true;
    Stopping stopping = Stopping::kEither;
    /// The generalized Rayleigh-Ritz residual costs O(np^2 + p^3), so it is
    /// evaluated once every this many iterations.
    int residual_check_interval = 10;
    std::uint64_t seed = 0;
    bool record_trace = true;
    /// Abort when ||X||_F exceeds divergence_factor * sqrt(rho * p).
    double divergence_factor = 1e8;

    double resolved_momentum_beta() const {
        if (momentum_beta) return *momentum_beta;
        return objective == Objective::kObj1 ? 0.9 : 0.95;
    }
};

struct TraceRow {
    long iteration = 0;
    int col_index = 0;        // 1-based in files
    double g_norm = 0.0;      // frozen at its lock-time value for locked columns
    double err_norm = 0.0;    // NaN when no reference is supplied
    double alpha = 0.0;       // stepsize applied to this column this iteration
    bool locked = false;
    long cum_col_access = 0;
    double residual = 0.0;    // NaN on iterations without a residual check
};

struct LockEvent {
    long iteration = 0;
    int col_index = 0;
};

struct ConvergenceTrace {
    std::vector<TraceRow> rows;
    std::vector<LockEvent> lock_events;
};

struct SolveResult {
    BlockVector x;
    std::vector<double> ritz_values;  // ascending; empty if X was rank deficient
    long iterations = 0;
    long column_accesses = 0;
    bool converged = false;
    double final_residual = 0.0;  // NaN if never evaluated
    bool positive_ritz_warning = false;
    ConvergenceTrace trace;
};

using TraceCallback = std::function<void(const TraceRow&)>;

struct RayleighRitz {
    double residual = 0.0;  // ||AXQ - XQ diag(L)||_F / ||AXQ||_F
    std::vector<double> ritz_values;
    Matrix q;
};

/// Rayleigh-Ritz data from precomputed AX.
RayleighRitz rayleigh_ritz(const Matrix& x, const Matrix& ax);

/// Convenience overload that applies the operator (and counts the accesses).
RayleighRitz rayleigh_ritz_residual(const SymmetricOperator& a, BlockVector& x);

/// Locking test for column i: the objective-specific product
///   ||g_i|| * ||A x_i||^(1/3)  (residual objective)
///   ||g_i|| * ||A x_i||        (orbital objective)
/// must fall below epsilon AND every earlier column must already be locked.
bool check_lock(int col, double g_norm, double ax_norm, Objective objective, double epsilon,
                const std::vector<bool>& locked);

/// Linearized error-propagation step for the triangularized residual scheme:
/// maps the matrix of eigenbasis error components E (entry (j,i) = component
/// j of column i's error) one iteration forward, dropping higher-order terms.
Matrix error_propagation_step(const std::vector<double>& spectrum, double alpha, const Matrix& e);

/// Per-component linear factor of the map above for column i (1-based
/// component j): (1 + 2 a l_i) on the diagonal, (1 + a (l_j - l_i)) below.
double error_propagation_factor(const std::vector<double>& spectrum, double alpha, int i, int j);

/// Runs the block iteration from x0 until a stopping rule, the iteration cap,
/// or full locking. Deterministic for a fixed config and inputs. Throws
/// DivergenceError when the iterate stops being finite.
SolveResult solve(const SymmetricOperator& a, BlockVector x0, const SolverConfig& config,
                  const ReferenceEigen* reference = nullptr, const TraceCallback& callback = {});

}  // namespace triofm
