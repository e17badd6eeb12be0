#include "triofm/acceleration.hpp"

#include <algorithm>

#include "triofm/types.hpp"

namespace triofm {

namespace {

bool is_locked(const std::vector<bool>* locked, int j) {
    return locked && (*locked)[static_cast<std::size_t>(j)];
}

}  // namespace

void momentum_update(const Matrix& g, AccelState& state, double beta,
                     const std::vector<bool>* locked, Matrix& v) {
    if (!(beta > 0.0) || beta > 1.0) throw ConfigError("momentum beta must lie in (0, 1]");
    if (state.v_prev.rows != g.rows || state.v_prev.cols != g.cols)
        throw DimensionError("momentum state shape does not match the direction");
    if (v.rows != g.rows || v.cols != g.cols) v = Matrix(g.rows, g.cols);
    for (int j = 0; j < g.cols; ++j) {
        if (is_locked(locked, j)) continue;
        const double* gj = g.col(j);
        const double* pj = state.v_prev.col(j);
        double* vj = v.col(j);
        for (int i = 0; i < g.rows; ++i) vj[i] = beta * gj[i] + (1.0 - beta) * pj[i];
        std::copy(vj, vj + g.rows, state.v_prev.col(j));
    }
    state.has_history = true;
}

double cg_beta_columnwise(const double* g_curr, const double* g_prev, int n, bool clamp,
                          bool* restart) {
    const double denom = dot(g_prev, g_prev, n);
    if (denom == 0.0) {
        if (restart) *restart = true;
        return 0.0;
    }
    if (restart) *restart = false;
    double beta = (dot(g_curr, g_curr, n) - dot(g_prev, g_curr, n)) / denom;
    if (clamp) beta = std::max(beta, 0.0);
    return beta;
}

double cg_beta_block(const Matrix& g_curr, const Matrix& g_prev, bool clamp) {
    if (g_curr.rows != g_prev.rows || g_curr.cols != g_prev.cols)
        throw DimensionError("cg_beta_block: shape mismatch");
    double denom = 0.0, numer = 0.0;
    for (std::size_t k = 0; k < g_curr.data.size(); ++k) {
        denom += g_prev.data[k] * g_prev.data[k];
        numer += (g_curr.data[k] - g_prev.data[k]) * g_curr.data[k];
    }
    if (denom == 0.0) return 0.0;
    double beta = numer / denom;
    if (clamp) beta = std::max(beta, 0.0);
    return beta;
}

void cg_direction_update(const Matrix& g, AccelState& state, const std::vector<bool>* locked,
                         Matrix& v) {
    if (state.v_prev.rows != g.rows || state.v_prev.cols != g.cols)
        throw DimensionError("cg state shape does not match the direction");
    if (v.rows != g.rows || v.cols != g.cols) v = Matrix(g.rows, g.cols);
    for (int j = 0; j < g.cols; ++j) {
        if (is_locked(locked, j)) continue;
        const double* gj = g.col(j);
        double* vj = v.col(j);
        double beta = 0.0;
        if (state.has_history)
            beta = cg_beta_columnwise(gj, state.g_prev.col(j), g.rows, state.pr_plus_clamp,
                                      nullptr);
        const double* pj = state.v_prev.col(j);
        for (int i = 0; i < g.rows; ++i) vj[i] = -gj[i] + beta * pj[i];
        std::copy(vj, vj + g.rows, state.v_prev.col(j));
        std::copy(gj, gj + g.rows, state.g_prev.col(j));
    }
    state.has_history = true;
}

void cg_direction_update_block(const Matrix& g, AccelState& state, Matrix& v) {
    if (state.v_prev.rows != g.rows || state.v_prev.cols != g.cols)
        throw DimensionError("cg state shape does not match the direction");
    if (v.rows != g.rows || v.cols != g.cols) v = Matrix(g.rows, g.cols);
    double beta = 0.0;
    if (state.has_history) beta = cg_beta_block(g, state.g_prev, state.pr_plus_clamp);
    for (std::size_t k = 0; k < g.data.size(); ++k)
        v.data[k] = -g.data[k] + beta * state.v_prev.data[k];
    state.v_prev = v;
    state.g_prev = g;
    state.has_history = true;
}

}  // namespace triofm
