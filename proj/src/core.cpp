#include "vpgmres/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vpgmres {

Matrix Matrix::dense(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("Matrix::dense: dimensions must be positive");
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.sparse_ = false;
  m.val_.assign(rows * cols, 0.0);
  return m;
}

Matrix Matrix::dense(std::size_t rows, std::size_t cols,
                     std::vector<double> row_major) {
  if (row_major.size() != rows * cols)
    throw std::invalid_argument("Matrix::dense: value count mismatch");
  Matrix m = dense(rows, cols);
  m.val_ = std::move(row_major);
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m = dense(n, n);
  for (std::size_t i = 0; i < n; ++i) m.val_[i * n + i] = 1.0;
  return m;
}

Matrix Matrix::sparse_from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> entries) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("Matrix: dimensions must be positive");
  for (const Triplet& t : entries) {
    if (t.row >= rows || t.col >= cols)
      throw std::invalid_argument("Matrix: triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t p = 1; p < entries.size(); ++p) {
    if (entries[p].row == entries[p - 1].row &&
        entries[p].col == entries[p - 1].col)
      throw std::invalid_argument("Matrix: duplicate entry (" +
                                  std::to_string(entries[p].row + 1) + "," +
                                  std::to_string(entries[p].col + 1) + ")");
  }
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.sparse_ = true;
  m.val_.reserve(entries.size());
  m.col_idx_.reserve(entries.size());
  m.row_ptr_.assign(rows + 1, 0);
  for (const Triplet& t : entries) ++m.row_ptr_[t.row + 1];
  for (std::size_t i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  for (const Triplet& t : entries) {
    m.col_idx_.push_back(t.col);
    m.val_.push_back(t.value);
  }
  return m;
}

std::size_t Matrix::stored_entries() const { return val_.size(); }

std::size_t Matrix::nnz() const {
  std::size_t count = 0;
  for (double v : val_)
    if (v != 0.0) ++count;
  return count;
}

std::size_t Matrix::max_row_entries() const {
  if (!sparse_) return cols_;
  std::size_t best = 0;
  for (std::size_t i = 0; i < rows_; ++i)
    best = std::max(best, row_ptr_[i + 1] - row_ptr_[i]);
  return best;
}

double Matrix::operator()(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_)
    throw std::out_of_range("Matrix: index out of range");
  if (!sparse_) return val_[i * cols_ + j];
  for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
    if (col_idx_[p] == j) return val_[p];
  return 0.0;
}

double& Matrix::at(std::size_t i, std::size_t j) {
  if (sparse_) throw std::logic_error("Matrix::at: dense storage only");
  if (i >= rows_ || j >= cols_)
    throw std::out_of_range("Matrix: index out of range");
  return val_[i * cols_ + j];
}

Matrix Matrix::transposed() const {
  if (!sparse_) {
    Matrix m = dense(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        m.val_[j * rows_ + i] = val_[i * cols_ + j];
    return m;
  }
  std::vector<Triplet> tr;
  tr.reserve(val_.size());
  for_each_stored([&](std::size_t i, std::size_t j, double v) {
    tr.push_back({j, i, v});
  });
  return sparse_from_triplets(cols_, rows_, std::move(tr));
}

double dot(const Vector& v, const Vector& w) {
  if (v.size() != w.size())
    throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
  return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void axpy(double a, const Vector& x, Vector& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vector scaled(const Vector& v, double a) {
  Vector out(v);
  for (double& x : out) x *= a;
  return out;
}

Vector matvec(const Matrix& A, const Vector& v) {
  if (A.ncols() != v.size())
    throw std::invalid_argument("matvec: dimension mismatch");
  Vector w(A.nrows(), 0.0);
  if (!A.is_sparse()) {
    const std::vector<double>& a = A.values();
    for (std::size_t i = 0; i < A.nrows(); ++i) {
      double s = 0.0;
      const double* row = a.data() + i * A.ncols();
      for (std::size_t j = 0; j < A.ncols(); ++j) s += row[j] * v[j];
      w[i] = s;
    }
  } else {
    const auto& rp = A.row_ptr();
    const auto& ci = A.col_idx();
    const auto& av = A.values();
    for (std::size_t i = 0; i < A.nrows(); ++i) {
      double s = 0.0;
      for (std::size_t p = rp[i]; p < rp[i + 1]; ++p) s += av[p] * v[ci[p]];
      w[i] = s;
    }
  }
  return w;
}

Vector matvec_transposed(const Matrix& A, const Vector& v) {
  if (A.nrows() != v.size())
    throw std::invalid_argument("matvec_transposed: dimension mismatch");
  Vector w(A.ncols(), 0.0);
  A.for_each_stored([&](std::size_t i, std::size_t j, double x) {
    w[j] += x * v[i];
  });
  return w;
}

double frobenius_norm(const Matrix& A) {
  double s = 0.0;
  for (double v : A.values()) s += v * v;
  return std::sqrt(s);
}

double norm_inf_rows(const Matrix& A) {
  std::vector<double> sums(A.nrows(), 0.0);
  A.for_each_stored([&](std::size_t i, std::size_t, double v) {
    sums[i] += std::abs(v);
  });
  double m = 0.0;
  for (double s : sums) m = std::max(m, s);
  return m;
}

}  // namespace vpgmres
