#include "vpgmres/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace vpgmres {

Matrix grcar(std::size_t n, std::size_t superdiags) {
  if (n == 0) throw std::invalid_argument("grcar: n must be >= 1");
  std::vector<Matrix::Triplet> tr;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n) tr.push_back({i + 1, i, -1.0});
    tr.push_back({i, i, 1.0});
    for (std::size_t d = 1; d <= superdiags && i + d < n; ++d)
      tr.push_back({i, i + d, 1.0});
  }
  return Matrix::sparse_from_triplets(n, n, std::move(tr));
}

Vector sine_rhs(const Matrix& A) {
  if (A.nrows() != A.ncols())
    throw std::invalid_argument("sine_rhs: matrix must be square");
  Vector s(A.ncols());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = std::sin(static_cast<double>(i + 1));
  return matvec(A, s);
}

Matrix spd_test_matrix(std::size_t n, double cond) {
  if (n < 32) throw std::invalid_argument("spd_test_matrix: n must be >= 32");
  if (cond <= 1.0)
    throw std::invalid_argument("spd_test_matrix: cond must be > 1");
  const double lam_max = 6.0;
  const double lam_min = lam_max / cond;
  const double shift = 0.2;  // bulk spectrum lives in [shift, shift + 4)
  const std::size_t n_tail = 14;
  const std::size_t n_bulk = n - n_tail - 1;

  std::vector<Matrix::Triplet> tr;
  // Tridiagonal bulk: eigenvalues shift + 2 - 2 cos(k pi / (n_bulk + 1)),
  // strictly inside (lam_min, lam_max).
  for (std::size_t i = 0; i < n_bulk; ++i) {
    tr.push_back({i, i, shift + 2.0});
    if (i + 1 < n_bulk) {
      tr.push_back({i, i + 1, -1.0});
      tr.push_back({i + 1, i, -1.0});
    }
  }
  // Geometric tail of small isolated eigenvalues from lam_min up to the
  // bulk edge, plus the dominant entry pinning lambda_max.
  const double ratio =
      std::pow(shift / lam_min, 1.0 / static_cast<double>(n_tail));
  for (std::size_t q = 0; q < n_tail; ++q) {
    const double value =
        q == 0 ? lam_min : lam_min * std::pow(ratio, static_cast<double>(q));
    tr.push_back({n_bulk + q, n_bulk + q, value});
  }
  tr.push_back({n - 1, n - 1, lam_max});
  return Matrix::sparse_from_triplets(n, n, std::move(tr));
}

Vector ones(std::size_t n) { return Vector(n, 1.0); }

}  // namespace vpgmres
