#pragma once

#include <stdexcept>
#include <vector>

#include "vpgmres/core.hpp"

namespace vpgmres {

/// Thrown when power iteration fails to certify the requested accuracy.
/// Carries the best estimate obtained so far.
struct NormEstimateError : std::runtime_error {
  NormEstimateError(const std::string& what, double best_estimate)
      : std::runtime_error(what), best(best_estimate) {}
  double best;
};

/// Estimate of sigma_max(A) by power iteration on A^T A with the
/// deterministic all-ones start vector. Stops once the eigenpair residual
/// certifies relative accuracy `tol`; throws NormEstimateError after
/// max_iter sweeps.
double matrix_norm2(const Matrix& A, double tol = 1e-8, int max_iter = 5000);

/// Smallest singular value via dense SVD. Intended for desk-scale matrices;
/// also used for sigma_min(H_k).
double sigma_min(const Matrix& A);

/// All singular values, descending, via dense SVD.
std::vector<double> singular_values(const Matrix& A);

/// ||A||_2 via dense SVD (diagnostics-grade, independent of matrix_norm2).
double spectral_norm_svd(const Matrix& A);

/// Eigenvalues of a symmetric matrix, ascending.
std::vector<double> eigenvalues_symmetric(const Matrix& A);

/// Solves the dense least-squares problem min_y ||rhs - A y||_2 by
/// column-pivoted QR. Used by the diagnostics code paths that must stay
/// independent of the incremental Givens machinery.
Vector dense_least_squares(const Matrix& A, const Vector& rhs);

/// Spectral norm of a symmetric matrix by two shifted power iterations with
/// optional warm-start vectors. Cheap enough to run every solver iteration.
class SymmetricNormEstimator {
 public:
  /// gram is the full symmetric matrix, stored dense row-major (m x m).
  double estimate(const std::vector<double>& gram, std::size_t m);

 private:
  std::vector<double> warm_hi_, warm_lo_;
};

}  // namespace vpgmres
