#include <cmath>

#include "doctest.h"
#include "vpgmres/diagnostics.hpp"
#include "vpgmres/experiments.hpp"
#include "vpgmres/generators.hpp"
#include "vpgmres/spectral.hpp"
#include "vpgmres/verify.hpp"

using namespace vpgmres;

namespace {

ExperimentConfig grcar_perturb_cfg(double level, std::size_t kmax,
                                   std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.matrix.generator = "grcar";
  cfg.matrix.n = 100;
  cfg.matrix.superdiags = 5;
  cfg.mode = InexactMode::Perturbation;
  cfg.threshold = ThresholdMode::FixedTable;
  cfg.table.default_value = level;
  cfg.table.relative = true;
  cfg.epsilon = level;
  cfg.relative_epsilon = true;
  cfg.kmax = kmax;
  cfg.stop_tol = 1e-300;
  cfg.seed = seed;
  cfg.no_reference = true;
  return cfg;
}

}  // namespace

TEST_CASE("loss_of_orthogonality") {
  // orthonormal columns
  Matrix v = Matrix::dense(4, 2, {1, 0, 0, 1, 0, 0, 0, 0});
  CHECK(loss_of_orthogonality(v) <= 10 * 2 * kBinary64.unit_roundoff);

  // duplicated column: Gram = ones(2), deviation norm 1
  Matrix dup = Matrix::dense(3, 2, {1, 1, 0, 0, 0, 0});
  CHECK(loss_of_orthogonality(dup) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("F-norm bound by twice the strict upper part") {
  RunArtifacts art = execute(grcar_perturb_cfg(1e-6, 30, 5));
  const std::size_t k = art.run.k_final;
  REQUIRE(k >= 10);
  OrthoDiagnostics d = make_ortho_diagnostics(art.run.state, k);
  CHECK(d.f_norm <= 2.0 * spectral_norm_svd(d.u) * (1 + 1e-10));
  // report column agrees with the SVD value
  CHECK(art.run.report.rows[k - 1].f_norm ==
        doctest::Approx(d.f_norm).epsilon(1e-6));
}

TEST_CASE("NUR identity: exact mode gives rounding-level defect") {
  ExperimentConfig cfg = grcar_perturb_cfg(1e-6, 30, 1);
  cfg.mode = InexactMode::Exact;
  RunArtifacts art = execute(cfg);
  OrthoDiagnostics d = make_ortho_diagnostics(art.run.state, art.run.k_final);
  // N = 0 in exact mode; U is rounding-level, so the defect normalizes
  // against ||U R||.
  CHECK(check_nur_identity(d) <= 1e-10);
}

TEST_CASE("NUR identity on a perturbed Grcar run (eta = 1e-6 ||A||)") {
  ExperimentConfig cfg = grcar_perturb_cfg(1e-6, 30, 7);
  cfg.normalization_exact = true;
  RunArtifacts art = execute(cfg);
  OrthoDiagnostics d = make_ortho_diagnostics(art.run.state, art.run.k_final);
  CHECK(check_nur_identity(d) <= 1e-8);
}

TEST_CASE("single-step identity eta_11 = -h_21 v_1^T v_2") {
  RunArtifacts art = execute(grcar_perturb_cfg(1e-4, 5, 11));
  const KrylovState& st = art.run.state;
  const double eta11 = st.records[0].etas[0];
  const double h21 = st.h_cols[0][1];
  const double v1v2 = dot(st.basis[0], st.basis[1]);
  const double scale = std::max(std::abs(eta11), 1e-30);
  CHECK(std::abs(eta11 + h21 * v1v2) <= 1e-12 + 1e-10 * scale);
}

TEST_CASE("W inner product construction") {
  // orthonormal columns: M = 0, kappa = 1
  Matrix q = Matrix::dense(5, 2, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0});
  WInnerProduct w = construct_w_inner_product(q);
  CHECK(w.kappa2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.identity_defect <= 1e-12);
  CHECK(frobenius_norm(w.m) <= 1e-12);

  // delta = 1/2 gives kappa <= 3
  Matrix v = Matrix::dense(4, 2);
  const double s1 = std::sqrt(1.5), s2 = std::sqrt(0.5);
  v.at(0, 0) = s1;
  v.at(1, 1) = s2;
  WInnerProduct w2 = construct_w_inner_product(v);
  CHECK(w2.delta == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w2.kappa2 <= 3.0 * (1 + 1e-10));
  CHECK(w2.kappa2 == doctest::Approx(3.0).epsilon(1e-10));

  // eigenvalues of I+M are sigma_i(V)^-2 and ones
  std::vector<double> expect = {1.0 / 1.5, 1.0, 1.0, 1.0 / 0.5};
  std::sort(expect.begin(), expect.end());
  REQUIRE(w2.eigenvalues.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(w2.eigenvalues[i] == doctest::Approx(expect[i]).epsilon(1e-8));

  // eigenvalue sandwich for injected delta = 0.3
  SuiteResult qre = run_qre_suite(8, 42, {0.3});
  CHECK(qre.ok());

  // degraded basis rejected
  Matrix bad = Matrix::dense(3, 2, {1, 1, 0, 0, 0, 0});
  CHECK_THROWS(construct_w_inner_product(bad));
}

TEST_CASE("||V_{k+1} t_k|| <= sqrt(1+delta) ||t_k||") {
  RunArtifacts art = execute(grcar_perturb_cfg(1e-5, 40, 13));
  const KrylovState& st = art.run.state;
  const std::size_t k = art.run.k_final;
  REQUIRE(st.basis.size() >= k + 1);
  const Matrix h = st.hessenberg(k);
  Vector rhs(k + 1, 0.0);
  rhs[0] = st.beta;
  Vector y = dense_least_squares(h, rhs);
  Vector t(k + 1, 0.0);
  for (std::size_t i = 0; i <= k; ++i) {
    double s = i == 0 ? st.beta : 0.0;
    for (std::size_t l = 0; l < k; ++l) s -= h(i, l) * y[l];
    t[i] = s;
  }
  Vector vt(st.basis[0].size(), 0.0);
  for (std::size_t l = 0; l <= k; ++l) axpy(t[l], st.basis[l], vt);
  const double delta = loss_of_orthogonality(st.basis, k + 1);
  REQUIRE(delta < 1.0);
  CHECK(norm2(vt) <= std::sqrt(1.0 + delta) * norm2(t) * (1 + 1e-12));
}

TEST_CASE("residual gap: exact run has rounding-level gap") {
  ExperimentConfig cfg = grcar_perturb_cfg(1e-8, 30, 2);
  cfg.mode = InexactMode::Exact;
  RunArtifacts art = execute(cfg);
  GapResult g = residual_gap(art.a, art.b, art.run, art.run.k_final);
  CHECK(g.gap <= 1e-12 * norm2(art.b));
}

TEST_CASE("residual gap bound on perturbed runs") {
  for (std::uint64_t seed : {21, 22}) {
    RunArtifacts art = execute(grcar_perturb_cfg(1e-7, 40, seed));
    for (std::size_t j = 4; j <= art.run.k_final; j += 7) {
      GapResult g = residual_gap(art.a, art.b, art.run, j);
      CHECK(g.within_bound());
    }
  }
}

TEST_CASE("stls closed-form case k=1") {
  Matrix h = Matrix::dense(2, 1, {1.0, 1.0});
  Matrix d = Matrix::dense(1, 1);
  const double eps = 0.5;
  // admissible: sigma_min(H) = sqrt(2), t = sqrt(2)/2, bound = eps*1
  d.at(0, 0) = 0.4;
  StlsResult r = check_stls_lemma(h, 1.0, d, eps);
  CHECK(r.condition_ok);
  CHECK(r.d_bound == doctest::Approx(0.5 * std::sqrt(2.0) * 1.0 /
                                     (std::sqrt(2.0) * std::sqrt(0.5)))
                         .epsilon(1e-12));
  CHECK(r.ejyk_ok);
  // |y_1| = 0.5 <= t_0 / sigma_min = 1/sqrt(2)
  CHECK(r.ejyk_min_slack ==
        doctest::Approx(1.0 / std::sqrt(2.0) - 0.5).epsilon(1e-12));
  CHECK(r.lower_ok);
  CHECK(r.upper_ok);
  CHECK(r.upper == doctest::Approx(std::sqrt(2.0) / 2.0 / (0.5 * 1.0))
                       .epsilon(1e-12));

  Matrix singular = Matrix::dense(1, 1);
  CHECK_THROWS(check_stls_lemma(h, 1.0, singular, eps));
}

TEST_CASE("stls sweep") {
  SuiteResult r = run_stls_suite(200, 31);
  CHECK(r.failed == 0);
}

TEST_CASE("theorem check: exact run against itself has ratio one") {
  ExperimentConfig cfg = grcar_perturb_cfg(1e-8, 40, 3);
  cfg.mode = InexactMode::Exact;
  RunArtifacts art = execute(cfg);
  TheoremCheck chk =
      check_theorem_conclusion(art.run.report, art.run.report, 1e-8);
  CHECK(chk.ok);
  CHECK(chk.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theorem disjunction on a two-pass Grcar run") {
  ExperimentConfig cfg;
  cfg.matrix.generator = "grcar";
  cfg.matrix.n = 100;
  cfg.matrix.superdiags = 5;
  cfg.mode = InexactMode::Perturbation;
  cfg.threshold = ThresholdMode::Theorem;
  cfg.epsilon = 1e-10;
  cfg.kmax = 100;
  cfg.seed = 17;
  RunArtifacts art = execute(cfg);
  REQUIRE(art.reference.has_value());
  REQUIRE(art.cfg.sigma_min_hk > 0.0);
  TheoremCheck chk = check_theorem_conclusion(art.run.report,
                                              art.reference->report, 1e-10);
  CHECK(chk.ok);
}
