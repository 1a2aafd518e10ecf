#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace vpgmres {

/// Working-precision vector. All solver data lives in binary64.
using Vector = std::vector<double>;

/// Square or rectangular matrix, either dense row-major or assembled CSR.
/// Immutable after construction; safe to share across threads.
class Matrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };

  Matrix() = default;

  static Matrix dense(std::size_t rows, std::size_t cols);
  static Matrix dense(std::size_t rows, std::size_t cols,
                      std::vector<double> row_major);
  static Matrix identity(std::size_t n);
  /// Assembles CSR from coordinate triplets. Throws on out-of-range indices
  /// or duplicate (i,j) pairs.
  static Matrix sparse_from_triplets(std::size_t rows, std::size_t cols,
                                     std::vector<Triplet> entries);

  std::size_t nrows() const { return rows_; }
  std::size_t ncols() const { return cols_; }
  bool is_sparse() const { return sparse_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  /// Stored nonzeros for sparse storage, rows*cols for dense.
  std::size_t stored_entries() const;
  /// Count of structurally stored entries that are nonzero.
  std::size_t nnz() const;
  std::size_t max_row_entries() const;

  double operator()(std::size_t i, std::size_t j) const;
  /// Mutable dense access (dense storage only).
  double& at(std::size_t i, std::size_t j);

  /// Visits stored entries as f(i, j, value). Dense storage visits every
  /// entry including zeros, in row-major order; CSR visits stored entries
  /// in row-major order.
  template <class F>
  void for_each_stored(F&& f) const {
    if (!sparse_) {
      for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) f(i, j, val_[i * cols_ + j]);
    } else {
      for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
          f(i, col_idx_[p], val_[p]);
    }
  }

  /// Applies f to every stored value, returning a matrix with the same
  /// structure.
  template <class F>
  Matrix map_values(F&& f) const {
    Matrix out = *this;
    for (double& v : out.val_) v = f(v);
    return out;
  }

  const std::vector<double>& values() const { return val_; }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool sparse_ = false;
  std::vector<double> val_;
  std::vector<std::size_t> col_idx_;  // CSR only
  std::vector<std::size_t> row_ptr_;  // CSR only
};

double dot(const Vector& v, const Vector& w);
double norm2(const Vector& v);
double norm_inf(const Vector& v);
/// y += a * x
void axpy(double a, const Vector& x, Vector& y);
Vector scaled(const Vector& v, double a);

/// Plain binary64 product A*v with naive left-to-right accumulation.
Vector matvec(const Matrix& A, const Vector& v);
/// w = A^T * v, same accumulation policy.
Vector matvec_transposed(const Matrix& A, const Vector& v);

double frobenius_norm(const Matrix& A);
double norm_inf_rows(const Matrix& A);

}  // namespace vpgmres
