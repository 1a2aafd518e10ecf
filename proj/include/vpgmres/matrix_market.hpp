#pragma once

#include <stdexcept>
#include <string>

#include "vpgmres/core.hpp"

namespace vpgmres {

struct MatrixMarketError : std::runtime_error {
  MatrixMarketError(const std::string& what, long line_number)
      : std::runtime_error(what + " (line " + std::to_string(line_number) +
                           ")"),
        line(line_number) {}
  long line;
};

/// Reads a Matrix Market file. Accepts coordinate and array formats with
/// real field and general or symmetric symmetry; symmetric storage is
/// expanded to full. Pattern, integer and complex files are rejected.
Matrix read_matrix_market(const std::string& path);

/// Writes coordinate format for sparse storage, array format for dense.
/// With symmetric_lower set, writes only the lower triangle with a
/// `symmetric` header (matrix must be square and symmetric).
void write_matrix_market(const Matrix& A, const std::string& path,
                         bool symmetric_lower = false);

}  // namespace vpgmres
