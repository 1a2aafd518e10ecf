#include "vpgmres/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace vpgmres {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& A) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(A.nrows()), static_cast<Eigen::Index>(A.ncols()));
  A.for_each_stored([&](std::size_t i, std::size_t j, double v) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
  });
  return m;
}

}  // namespace

double matrix_norm2(const Matrix& A, double tol, int max_iter) {
  if (A.empty()) throw std::invalid_argument("matrix_norm2: empty matrix");
  if (tol <= 0.0) throw std::invalid_argument("matrix_norm2: tol must be > 0");
  const std::size_t n = A.ncols();
  Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector ax = matvec(A, x);
    Vector z = matvec_transposed(A, ax);  // A^T A x
    lambda = dot(x, z);                   // Rayleigh quotient, x unit
    const double zn = norm2(z);
    if (zn == 0.0) return 0.0;
    // Residual ||A^T A x - lambda x|| <= tol * lambda certifies that lambda
    // is within tol of an eigenvalue of A^T A.
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = z[i] - lambda * x[i];
      res += r * r;
    }
    if (std::sqrt(res) <= 0.5 * tol * lambda && it > 0)
      return std::sqrt(lambda);
    for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / zn;
  }
  throw NormEstimateError("matrix_norm2: power iteration did not certify " +
                              std::to_string(tol) + " after " +
                              std::to_string(max_iter) + " iterations",
                          std::sqrt(lambda));
}

double sigma_min(const Matrix& A) {
  const std::vector<double> sv = singular_values(A);
  return sv.back();
}

std::vector<double> singular_values(const Matrix& A) {
  if (A.empty()) throw std::invalid_argument("singular_values: empty matrix");
  Eigen::MatrixXd m = to_eigen(A);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("singular_values: SVD did not converge");
  std::vector<double> out(svd.singularValues().data(),
                          svd.singularValues().data() +
                              svd.singularValues().size());
  return out;
}

double spectral_norm_svd(const Matrix& A) { return singular_values(A).front(); }

std::vector<double> eigenvalues_symmetric(const Matrix& A) {
  Eigen::MatrixXd m = to_eigen(A);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues_symmetric: solver failed");
  return std::vector<double>(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
}

Vector dense_least_squares(const Matrix& A, const Vector& rhs) {
  if (A.nrows() != rhs.size())
    throw std::invalid_argument("dense_least_squares: dimension mismatch");
  Eigen::MatrixXd m = to_eigen(A);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rhs.size()));
  for (std::size_t i = 0; i < rhs.size(); ++i)
    b(static_cast<Eigen::Index>(i)) = rhs[i];
  Eigen::VectorXd y = m.colPivHouseholderQr().solve(b);
  return Vector(y.data(), y.data() + y.size());
}

double SymmetricNormEstimator::estimate(const std::vector<double>& gram,
                                        std::size_t m) {
  if (gram.size() != m * m)
    throw std::invalid_argument("SymmetricNormEstimator: size mismatch");
  double fro = 0.0;
  for (double v : gram) fro += v * v;
  fro = std::sqrt(fro);
  if (fro == 0.0) return 0.0;

  // Dominant eigenvalue of the positive semidefinite matrix S + c I (and of
  // c I - S) recovers lambda_max(S) and -lambda_min(S); the spectral norm is
  // the larger of the two. Warm-started power iteration.
  const double c = fro;
  auto power = [&](double sign, std::vector<double>& warm) {
    if (warm.size() != m) {
      warm.assign(m, 1.0 / std::sqrt(static_cast<double>(m)));
    } else {
      double nv = 0.0;
      for (double v : warm) nv += v * v;
      nv = std::sqrt(nv);
      if (nv == 0.0) warm.assign(m, 1.0 / std::sqrt(static_cast<double>(m)));
      else
        for (double& v : warm) v /= nv;
    }
    std::vector<double> y(m);
    double mu = 0.0;
    for (int it = 0; it < 400; ++it) {
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        const double* row = gram.data() + i * m;
        for (std::size_t j = 0; j < m; ++j) s += sign * row[j] * warm[j];
        y[i] = s + c * warm[i];
      }
      mu = 0.0;
      for (std::size_t i = 0; i < m; ++i) mu += warm[i] * y[i];
      double res = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double r = y[i] - mu * warm[i];
        res += r * r;
      }
      double yn = 0.0;
      for (double v : y) yn += v * v;
      yn = std::sqrt(yn);
      if (yn == 0.0) break;
      for (std::size_t i = 0; i < m; ++i) warm[i] = y[i] / yn;
      if (std::sqrt(res) <= 1e-10 * c + 1e-10 * mu) break;
    }
    return mu - c;
  };
  const double hi = power(1.0, warm_hi_);   // lambda_max(S)
  const double lo = power(-1.0, warm_lo_);  // -lambda_min(S)
  return std::max({hi, lo, 0.0});
}

}  // namespace vpgmres
