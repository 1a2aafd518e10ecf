#include "vpgmres/inexact.hpp"

#include <cmath>
#include <stdexcept>

namespace vpgmres {

PerturbedDot perturbed_dot(const Vector& v, const Vector& w, double eta_bound,
                           Rng& rng) {
  if (eta_bound < 0.0)
    throw std::invalid_argument("perturbed_dot: eta_bound must be >= 0");
  const double exact = dot(v, w);
  if (eta_bound == 0.0) return {exact, 0.0};
  const double eta = rng.uniform(-eta_bound, eta_bound);
  const double value = exact + eta;
  // The addition may round; re-derive eta so that value - exact is
  // reproduced bit-exactly by the record.
  return {value, value - exact};
}

namespace {

// ||G||_2 by power iteration on G^T G; converges from below. Returns the
// best estimate after the residual certifies 1e-6 or the sweep cap. The
// G x and G^T (G x) passes are fused into one traversal of G, since the
// sweep is memory-bound on the n x n sample.
double gaussian_norm_estimate(const std::vector<double>& g, std::size_t rows,
                              std::size_t cols) {
  Vector x(cols, 1.0 / std::sqrt(static_cast<double>(cols)));
  Vector z(cols);
  double lambda = 0.0;
  for (int it = 0; it < 4000; ++it) {
    for (std::size_t j = 0; j < cols; ++j) z[j] = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      const double* row = g.data() + i * cols;
      // Four independent partial sums; a single serial chain would be
      // add-latency bound. The fixed order keeps the estimate deterministic.
      double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
      std::size_t j = 0;
      for (; j + 4 <= cols; j += 4) {
        s0 += row[j] * x[j];
        s1 += row[j + 1] * x[j + 1];
        s2 += row[j + 2] * x[j + 2];
        s3 += row[j + 3] * x[j + 3];
      }
      double s = (s0 + s1) + (s2 + s3);
      for (; j < cols; ++j) s += row[j] * x[j];
      for (std::size_t j2 = 0; j2 < cols; ++j2) z[j2] += row[j2] * s;
    }
    lambda = 0.0;
    for (std::size_t i = 0; i < cols; ++i) lambda += x[i] * z[i];
    double res = 0.0, zn = 0.0;
    for (std::size_t i = 0; i < cols; ++i) {
      const double r = z[i] - lambda * x[i];
      res += r * r;
      zn += z[i] * z[i];
    }
    zn = std::sqrt(zn);
    if (zn == 0.0) return 0.0;
    if (std::sqrt(res) <= 5e-7 * lambda && it > 0) break;
    for (std::size_t i = 0; i < cols; ++i) x[i] = z[i] / zn;
  }
  return std::sqrt(lambda);
}

}  // namespace

PerturbedMatvec perturbed_matvec(const Matrix& A, const Vector& v,
                                 double eps_bound, Rng& rng, bool economy) {
  if (A.ncols() != v.size())
    throw std::invalid_argument("perturbed_matvec: dimension mismatch");
  if (eps_bound < 0.0)
    throw std::invalid_argument("perturbed_matvec: eps_bound must be >= 0");
  Vector w = matvec(A, v);
  if (eps_bound == 0.0) return {std::move(w), 0.0, Vector(v.size(), 0.0)};

  const std::size_t n = A.nrows();
  Vector d(n, 0.0);
  if (economy) {
    Vector g(n), h(v.size());
    for (double& x : g) x = rng.normal();
    for (double& x : h) x = rng.normal();
    const double scale = eps_bound * dot(h, v) / (norm2(g) * norm2(h));
    for (std::size_t i = 0; i < n; ++i) d[i] = scale * g[i];
  } else {
    const std::size_t m = A.ncols();
    std::vector<double> g(n * m);
    for (double& x : g) x = rng.normal();
    const double gnorm = gaussian_norm_estimate(g, n, m);
    const double scale = eps_bound / gnorm;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      const double* row = g.data() + i * m;
      for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
      d[i] = scale * s;
    }
  }
  for (std::size_t i = 0; i < n; ++i) w[i] += d[i];
  return {std::move(w), eps_bound, std::move(d)};
}

}  // namespace vpgmres
