#pragma once

#include <Eigen/Sparse>

namespace mpspec {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Kronecker product a (x) b. Row index of the result is i_a * rows(b) + i_b.
SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

} // namespace mpspec
