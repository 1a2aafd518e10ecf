#include "vpgmres/diagnostics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vpgmres/spectral.hpp"

namespace vpgmres {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& A) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(A.nrows()),
      static_cast<Eigen::Index>(A.ncols()));
  A.for_each_stored([&](std::size_t i, std::size_t j, double v) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
  });
  return m;
}

Matrix from_eigen(const Eigen::MatrixXd& m) {
  Matrix out = Matrix::dense(static_cast<std::size_t>(m.rows()),
                             static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          m(i, j);
  return out;
}

double frob(const Matrix& m) { return frobenius_norm(m); }

}  // namespace

Matrix basis_matrix(const std::vector<Vector>& basis, std::size_t count) {
  if (count == 0 || count > basis.size())
    throw std::invalid_argument("basis_matrix: bad column count");
  Matrix v = Matrix::dense(basis[0].size(), count);
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t i = 0; i < basis[j].size(); ++i)
      v.at(i, j) = basis[j][i];
  return v;
}

double loss_of_orthogonality(const Matrix& v_columns) {
  if (v_columns.empty())
    throw std::invalid_argument("loss_of_orthogonality: empty matrix");
  const std::size_t m = v_columns.ncols();
  Eigen::MatrixXd v = to_eigen(v_columns);
  Eigen::MatrixXd dev = v.transpose() * v -
                        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m),
                                                  static_cast<Eigen::Index>(m));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dev);
  return svd.singularValues()(0);
}

double loss_of_orthogonality(const std::vector<Vector>& basis,
                             std::size_t count) {
  return loss_of_orthogonality(basis_matrix(basis, count));
}

OrthoDiagnostics make_ortho_diagnostics(const KrylovState& state,
                                        std::size_t k) {
  if (k == 0 || k > state.k())
    throw std::invalid_argument("make_ortho_diagnostics: bad prefix");
  if (state.basis.size() < k + 1)
    throw std::invalid_argument(
        "make_ortho_diagnostics: basis ended early (breakdown)");
  OrthoDiagnostics d;
  d.f = Matrix::dense(k + 1, k + 1);
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = 0; j <= k; ++j) {
      double g = dot(state.basis[i], state.basis[j]);
      if (i == j) g -= 1.0;
      d.f.at(i, j) = g;
    }
  d.f_norm = spectral_norm_svd(d.f);

  d.u = Matrix::dense(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j)
      d.u.at(i, j) = dot(state.basis[i], state.basis[j + 1]);

  d.n = Matrix::dense(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    const IterationRecord& rec = state.records[j];
    for (std::size_t i = 0; i < rec.etas.size() && i <= j; ++i)
      d.n.at(i, j) = rec.etas[i];
  }

  d.r = Matrix::dense(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i <= j; ++i)
      d.r.at(i, j) = state.h_cols[j][i + 1];
  return d;
}

double check_nur_identity(const OrthoDiagnostics& diag) {
  const std::size_t k = diag.n.nrows();
  if (diag.u.nrows() != k || diag.r.nrows() != k)
    throw std::invalid_argument("check_nur_identity: dimension mismatch");
  Matrix ur = Matrix::dense(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += diag.u(i, l) * diag.r(l, j);
      ur.at(i, j) = s;
    }
  double defect = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double e = diag.n(i, j) + ur(i, j);
      defect += e * e;
    }
  defect = std::sqrt(defect);
  // Scale floor ||R||_F: with N = 0 (exact runs) the residual U R consists
  // purely of rounding noise and must read as a tiny defect, so the
  // Hessenberg scale, not ||U R||_F itself, is the right normalizer.
  const double scale =
      std::max({frob(diag.n), frob(diag.r), kBinary64.unit_roundoff});
  return defect / scale;
}

WInnerProduct construct_w_inner_product(const Matrix& v_columns) {
  const std::size_t n = v_columns.nrows();
  const std::size_t k = v_columns.ncols();
  Eigen::MatrixXd v = to_eigen(v_columns);
  Eigen::MatrixXd gram = v.transpose() * v;
  Eigen::MatrixXd ik = Eigen::MatrixXd::Identity(
      static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  WInnerProduct out;
  {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(gram - ik);
    out.delta = svd.singularValues()(0);
  }
  // delta must sit strictly below 1; within roundoff of 1 the Gram matrix
  // is numerically singular.
  if (out.delta >= 1.0 - 1e-12)
    throw std::runtime_error(
        "construct_w_inner_product: orthogonality too degraded (delta >= 1)");

  Eigen::LDLT<Eigen::MatrixXd> gram_fact(gram);
  // M = V G^-1 (I - G) G^-1 V^T with G = V^T V.
  Eigen::MatrixXd inner = gram_fact.solve((ik - gram) * gram_fact.solve(ik));
  Eigen::MatrixXd m = v * inner * v.transpose();
  if (!m.allFinite())
    throw std::runtime_error(
        "construct_w_inner_product: orthogonality too degraded "
        "(Gram matrix numerically singular)");
  m = 0.5 * (m + m.transpose());  // symmetrize roundoff

  Eigen::MatrixXd w =
      Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(n)) +
      m;
  Eigen::MatrixXd check = v.transpose() * w * v - ik;
  out.identity_defect = check.cwiseAbs().maxCoeff();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("construct_w_inner_product: eigensolver failed");
  out.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  const double lam_min = out.eigenvalues.front();
  const double lam_max = out.eigenvalues.back();
  if (!(lam_min > 0.0) || !std::isfinite(lam_max))
    throw std::runtime_error(
        "construct_w_inner_product: I + M is not positive definite");
  out.kappa2 = lam_max / lam_min;
  out.m = from_eigen(m);
  return out;
}

GapResult residual_gap(const Matrix& A, const Vector& b,
                       const SolveOutcome& outcome, std::size_t j) {
  const KrylovState& st = outcome.state;
  if (j == 0 || j > st.k())
    throw std::invalid_argument("residual_gap: step out of range");
  if (st.basis.size() < j + 1)
    throw std::invalid_argument("residual_gap: basis ended early");

  const Matrix h = st.hessenberg(j);
  Vector rhs(j + 1, 0.0);
  rhs[0] = st.beta;
  const Vector y = dense_least_squares(h, rhs);

  Vector t(j + 1, 0.0);
  for (std::size_t i = 0; i <= j; ++i) {
    double s = i == 0 ? st.beta : 0.0;
    for (std::size_t l = 0; l < j; ++l) s -= h(i, l) * y[l];
    t[i] = s;
  }

  Vector x(b.size(), 0.0);
  for (std::size_t l = 0; l < j; ++l) axpy(y[l], st.basis[l], x);
  Vector gap_vec = matvec(A, x);
  for (std::size_t i = 0; i < b.size(); ++i)
    gap_vec[i] = b[i] - gap_vec[i];  // r_j
  for (std::size_t l = 0; l <= j; ++l) axpy(-t[l], st.basis[l], gap_vec);

  GapResult res;
  res.gap = norm2(gap_vec);
  const double smin = sigma_min(h);
  double acc = 0.0;
  for (std::size_t i = 1; i <= j; ++i)
    acc += st.records[i - 1].eps_applied * st.lsq.t_history()[i - 1];
  res.bound = acc / smin;
  const double a_scale = outcome.report.a_norm2 > 0.0
                             ? outcome.report.a_norm2
                             : norm_inf_rows(A);
  res.noise_floor = 10.0 * kBinary64.unit_roundoff *
                    std::sqrt(static_cast<double>(j)) *
                    (a_scale * norm2(x) + norm2(b));
  return res;
}

StlsResult check_stls_lemma(const Matrix& hessenberg, double beta,
                            const Matrix& d, double eps) {
  const std::size_t k = hessenberg.ncols();
  if (hessenberg.nrows() != k + 1)
    throw std::invalid_argument("check_stls_lemma: H must be (k+1) x k");
  if (d.nrows() != k || d.ncols() != k)
    throw std::invalid_argument("check_stls_lemma: D must be k x k");
  if (beta <= 0.0 || eps <= 0.0)
    throw std::invalid_argument("check_stls_lemma: beta, eps must be > 0");

  Eigen::MatrixXd h = to_eigen(hessenberg);
  Eigen::MatrixXd dm = to_eigen(d);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(dm);
  if (!lu.isInvertible())
    throw std::invalid_argument("check_stls_lemma: D is singular");

  StlsResult out;
  // Least-squares solutions and residuals of the nested subproblems.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k + 1));
  rhs(0) = beta;
  Eigen::VectorXd y = h.colPivHouseholderQr().solve(rhs);
  const double t_k = (rhs - h * y).norm();
  std::vector<double> t_hist(k + 1, beta);  // t_0 = beta
  for (std::size_t j = 1; j <= k; ++j) {
    Eigen::MatrixXd hj = h.topLeftCorner(static_cast<Eigen::Index>(j + 1),
                                         static_cast<Eigen::Index>(j));
    Eigen::VectorXd rj =
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(j + 1));
    rj(0) = beta;
    Eigen::VectorXd yj = hj.colPivHouseholderQr().solve(rj);
    t_hist[j] = (rj - hj * yj).norm();
  }

  Eigen::BDCSVD<Eigen::MatrixXd> hsvd(h);
  const double sigma_min_h =
      hsvd.singularValues()(hsvd.singularValues().size() - 1);

  out.d_norm = Eigen::BDCSVD<Eigen::MatrixXd>(dm).singularValues()(0);
  out.d_bound = sigma_min_h * eps * beta / (std::sqrt(2.0) * t_k);
  out.condition_ok = out.d_norm <= out.d_bound;

  // |e_j^T y_k| <= ||t_{j-1}|| / sigma_min(H_k)
  out.ejyk_ok = true;
  out.ejyk_min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= k; ++j) {
    const double bound = t_hist[j - 1] / sigma_min_h;
    const double slack = bound - std::abs(y(static_cast<Eigen::Index>(j - 1)));
    out.ejyk_min_slack = std::min(out.ejyk_min_slack, slack);
    // Allowance for SVD/QR roundoff in the comparison itself.
    if (slack < -1e-12 * std::max(1.0, bound)) out.ejyk_ok = false;
  }

  Eigen::MatrixXd stls(static_cast<Eigen::Index>(k + 1),
                       static_cast<Eigen::Index>(k + 1));
  stls.col(0) = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k + 1));
  stls(0, 0) = 1.0 / eps;
  stls.rightCols(static_cast<Eigen::Index>(k)) = h * lu.inverse();
  Eigen::BDCSVD<Eigen::MatrixXd> ssvd(stls);
  out.sigma = ssvd.singularValues()(ssvd.singularValues().size() - 1);

  const double dy = (dm * y).norm();
  out.lower =
      t_k / std::sqrt(eps * eps * beta * beta + 2.0 * dy * dy);
  out.upper = t_k / (eps * beta);
  out.lower_ok = out.sigma >= out.lower * (1.0 - 1e-10);
  out.upper_ok = out.sigma <= out.upper * (1.0 + 1e-10);
  return out;
}

TheoremCheck check_theorem_conclusion(const SolveReport& run,
                                      const SolveReport& reference, double eps,
                                      double slack) {
  TheoremCheck out;
  const double limit = std::sqrt(3.0) * (1.0 + slack);
  for (std::size_t idx = 0; idx < run.rows.size(); ++idx) {
    const IterationRow& row = run.rows[idx];
    // Reference curves freeze at their final value once that run stopped.
    const IterationRow& ref =
        idx < reference.rows.size() ? reference.rows[idx]
                                    : reference.rows.back();
    const double ratio = row.rel_resid_true / ref.rel_resid_true;
    const double converged_level = 6.0 * static_cast<double>(row.j) * eps;
    ++out.checked;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    if (!(ratio <= limit || row.rel_resid_recurred <= converged_level)) {
      out.ok = false;
      ++out.violations;
      out.violating_k.push_back(static_cast<std::size_t>(row.j));
    }
  }
  return out;
}

}  // namespace vpgmres
