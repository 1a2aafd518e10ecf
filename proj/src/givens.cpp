#include "vpgmres/givens.hpp"

#include <cmath>
#include <stdexcept>

namespace vpgmres {

GivensQr::GivensQr(double beta) : beta_(beta) {
  g_.push_back(beta);
  t_hist_.push_back(std::abs(beta));
}

double GivensQr::add_column(const Vector& column_above, double h_sub) {
  const std::size_t k = cols_.size();
  if (column_above.size() != k + 1)
    throw std::invalid_argument("GivensQr: column must have k+1 entries");
  if (h_sub < 0.0)
    throw std::invalid_argument("GivensQr: subdiagonal entry must be >= 0");

  std::vector<double> col(column_above);
  // Apply the stored rotations to the new column.
  for (std::size_t i = 0; i + 1 < col.size(); ++i) {
    const double a = col[i];
    const double b = col[i + 1];
    col[i] = cos_[i] * a + sin_[i] * b;
    col[i + 1] = -sin_[i] * a + cos_[i] * b;
  }
  // Generate the rotation eliminating h_sub.
  const double a = col.back();
  const double b = h_sub;
  double c = 1.0, s = 0.0;
  const double r = std::hypot(a, b);
  if (r > 0.0) {
    c = a / r;
    s = b / r;
  }
  col.back() = r;
  cos_.push_back(c);
  sin_.push_back(s);
  cols_.push_back(std::move(col));

  const double gk = g_.back();
  g_.back() = c * gk;
  g_.push_back(-s * gk);
  t_hist_.push_back(std::abs(g_.back()));
  return t_hist_.back();
}

Vector GivensQr::solve() const { return solve(cols_.size()); }

Vector GivensQr::solve(std::size_t j) const {
  if (j > cols_.size())
    throw std::out_of_range("GivensQr::solve: subproblem index out of range");
  Vector y(j, 0.0);
  for (std::size_t i = j; i-- > 0;) {
    double s = g_[i];
    for (std::size_t m = i + 1; m < j; ++m) s -= cols_[m][i] * y[m];
    const double rii = cols_[i][i];
    if (rii == 0.0)
      throw std::runtime_error("GivensQr::solve: singular triangular factor");
    y[i] = s / rii;
  }
  return y;
}

}  // namespace vpgmres
