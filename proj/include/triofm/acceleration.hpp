#pragma once

#include <vector>

#include "triofm/matrix.hpp"

namespace triofm {

enum class Acceleration { kNone, kMomentum, kCgColumnwise };

/// History carried between iterations by the accelerated variants: the
/// previous moving direction and the previous raw direction-field value.
/// Locked columns keep their last state and are excluded from updates.
struct AccelState {
    Acceleration kind = Acceleration::kNone;
    double beta = 0.0;  // momentum discount, in (0, 1]
    bool pr_plus_clamp = false;
    Matrix v_prev;
    Matrix g_prev;
    bool has_history = false;

    void reset(int n, int p) {
        v_prev = Matrix(n, p);
        g_prev = Matrix(n, p);
        has_history = false;
    }
};

/// V = beta * G + (1 - beta) * V_prev, per unlocked column; the first call
/// uses V_prev = 0. Updates the state. Throws ConfigError for beta outside
/// (0, 1].
void momentum_update(const Matrix& g, AccelState& state, double beta,
                     const std::vector<bool>* locked, Matrix& v);

/// Polak-Ribiere coefficient for one column:
/// (g_curr - g_prev)^T g_curr / (g_prev^T g_prev), clamped below at zero when
/// `clamp` is set. A vanishing previous direction signals a restart: beta = 0
/// and *restart = true.
double cg_beta_columnwise(const double* g_curr, const double* g_prev, int n, bool clamp,
                          bool* restart);

/// Block Polak-Ribiere coefficient over whole matrices (used by the
/// non-triangularized baselines only; it mixes information across columns).
double cg_beta_block(const Matrix& g_curr, const Matrix& g_prev, bool clamp);

/// Per-column conjugate direction update v_i = -g_i + beta_i v_i_prev, with
/// the first iteration using v_i = -g_i. Locked columns are left untouched.
void cg_direction_update(const Matrix& g, AccelState& state, const std::vector<bool>* locked,
                         Matrix& v);

/// Block-beta variant of the conjugate direction update for the baselines.
void cg_direction_update_block(const Matrix& g, AccelState& state, Matrix& v);

}  // namespace triofm
