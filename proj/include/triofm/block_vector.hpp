#pragma once

#include <vector>

#include "triofm/matrix.hpp"

namespace triofm {

/// An n-by-p ordered block of column vectors with per-column lock flags and a
/// column-access counter. Lock flags are prefix-monotone: column i may only be
/// locked once all columns before it are locked, and locks are never released.
struct BlockVector {
    Matrix values;
    std::vector<bool> locked;
    long column_access_count = 0;

    BlockVector() = default;
    BlockVector(int n, int p) : values(n, p), locked(static_cast<std::size_t>(p), false) {}
    explicit BlockVector(Matrix m)
        : values(std::move(m)), locked(static_cast<std::size_t>(values.cols), false) {}

    int n() const { return values.rows; }
    int p() const { return values.cols; }

    /// Number of leading locked columns (== number of locked columns).
    int locked_prefix() const {
        int k = 0;
        while (k < p() && locked[static_cast<std::size_t>(k)]) ++k;
        return k;
    }

    int unlocked_count() const { return p() - locked_prefix(); }

    /// Locks columns 0..i inclusive. Throws if that would skip a column.
    void lock_through(int i) {
        if (i < 0 || i >= p()) throw DimensionError("lock_through: column index out of range");
        for (int j = 0; j <= i; ++j) locked[static_cast<std::size_t>(j)] = true;
    }
};

/// Draws p independent unit-norm Gaussian columns; deterministic in the seed.
BlockVector random_unit_columns(int n, int p, std::uint64_t seed);

}  // namespace triofm
