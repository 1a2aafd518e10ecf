#pragma once

#include "vpgmres/core.hpp"

namespace vpgmres {

/// Grcar matrix: 1 on the diagonal and on `superdiags` superdiagonals,
/// -1 on the first subdiagonal, zero elsewhere. Nonnormal Toeplitz test
/// matrix; stored sparse.
Matrix grcar(std::size_t n, std::size_t superdiags);

/// b = A * [sin(1), sin(2), ..., sin(n)]^T (radians). A must be square.
Vector sine_rhs(const Matrix& A);

/// Symmetric positive definite sparse test matrix of order n with condition
/// number exactly `cond`: a shifted 1-D Laplacian bulk plus a geometric tail
/// of small diagonal outliers and one dominant diagonal entry. By
/// construction the extreme eigenvalues are lambda_max = 6 and
/// lambda_max / cond, so norm and conditioning are known scales for tests.
/// Requires n >= 32.
Matrix spd_test_matrix(std::size_t n, double cond);

Vector ones(std::size_t n);

}  // namespace vpgmres
