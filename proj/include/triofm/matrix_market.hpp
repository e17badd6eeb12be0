#pragma once

#include <string>

#include "triofm/matrix.hpp"
#include "triofm/operator.hpp"

namespace triofm {

/// Matrix Market I/O. Dense data uses the array format, operators with sparse
/// or diagonal storage use the coordinate format with the symmetric qualifier.
/// All values are written with 17 significant digits so that text round-trips
/// reproduce the doubles exactly.

void write_matrix_market(const std::string& path, const Matrix& m);
void write_matrix_market(const std::string& path, const SymmetricOperator& op);

/// Reads either array or coordinate files; symmetric coordinate entries are
/// mirrored. Throws ConfigError on malformed input.
Matrix read_matrix_market(const std::string& path);

/// Reads a matrix file into an operator (dense kind for array files, CSR for
/// coordinate files).
SymmetricOperator read_operator_matrix_market(const std::string& path);

}  // namespace triofm
