#pragma once

#include "vpgmres/core.hpp"

namespace vpgmres {

/// Incremental Givens-rotation QR of a growing Hessenberg matrix, tracking
/// the least-squares problem min_y ||beta*e1 - H_k y||_2.
///
/// After k columns the stored rotations reduce H_k to an upper-triangular
/// k x k block, and |g_{k+1}| equals the residual norm ||t_k||_2. Before any
/// column, ||t_0||_2 = beta. Single writer; reads are safe once updates stop.
class GivensQr {
 public:
  explicit GivensQr(double beta);

  /// Appends the next Hessenberg column. column_above holds the k+1 entries
  /// h_{1,k+1}..h_{k+1,k+1} above the subdiagonal; h_sub = h_{k+2,k+1} >= 0.
  /// Returns the updated residual norm ||t_{k+1}||_2.
  double add_column(const Vector& column_above, double h_sub);

  std::size_t size() const { return cols_.size(); }
  double beta() const { return beta_; }
  double t_norm() const { return t_hist_.back(); }
  /// Residual norms ||t_0||..||t_k||.
  const std::vector<double>& t_history() const { return t_hist_; }

  /// Current least-squares solution y_k by back substitution.
  Vector solve() const;
  /// Solution of the leading j-column subproblem, j <= size().
  Vector solve(std::size_t j) const;

 private:
  double beta_;
  std::vector<std::vector<double>> cols_;  // R columns, col j has j+1 entries
  std::vector<double> cos_, sin_;
  std::vector<double> g_;
  std::vector<double> t_hist_;
};

}  // namespace vpgmres
