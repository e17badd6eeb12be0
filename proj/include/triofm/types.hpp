#pragma once

#include <stdexcept>
#include <string>

namespace triofm {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape mismatch between an operator and a block of vectors.
struct DimensionError : Error {
    using Error::Error;
};

/// Invalid user-supplied configuration value.
struct ConfigError : Error {
    using Error::Error;
};

/// A matrix required to be (numerically) positive definite or full rank is not.
struct SingularError : Error {
    using Error::Error;
};

/// An iterative kernel failed to converge within its sweep budget.
struct IterationError : Error {
    IterationError(const std::string& what, long iterations)
        : Error(what), iterations(iterations) {}
    long iterations = 0;
};

/// The solver iterate blew up (NaN/Inf or norm beyond the guard radius).
struct DivergenceError : Error {
    DivergenceError(const std::string& what, long iteration, long column_accesses)
        : Error(what), iteration(iteration), column_accesses(column_accesses) {}
    long iteration = 0;
    long column_accesses = 0;
};

/// All cubic coefficients vanished; there is no root to select.
struct ZeroPolynomialError : Error {
    using Error::Error;
};

}  // namespace triofm
