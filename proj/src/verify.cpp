#include "vpgmres/verify.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "vpgmres/diagnostics.hpp"
#include "vpgmres/experiments.hpp"
#include "vpgmres/generators.hpp"
#include "vpgmres/report.hpp"
#include "vpgmres/rng.hpp"
#include "vpgmres/spectral.hpp"

namespace vpgmres {

namespace {

std::string fmt(double v) { return format_double(v); }

// Random n x k matrix with ||V^T V - I||_2 = delta exactly by construction:
// orthonormal columns scaled by sqrt(1 + mu_i) with max |mu_i| = delta,
// then mixed by a random rotation.
Matrix controlled_basis(std::size_t n, std::size_t k, double delta, Rng& rng) {
  Eigen::MatrixXd g(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(k));
  Eigen::VectorXd mu(static_cast<Eigen::Index>(k));
  mu(0) = delta;
  for (Eigen::Index i = 1; i < mu.size(); ++i)
    mu(i) = i == 1 ? -delta : rng.uniform(-delta, delta);
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    q.col(j) *= std::sqrt(1.0 + mu(j));

  Eigen::MatrixXd rot(static_cast<Eigen::Index>(k),
                      static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < rot.rows(); ++i)
    for (Eigen::Index j = 0; j < rot.cols(); ++j) rot(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> rqr(rot);
  Eigen::MatrixXd rq = rqr.householderQ();
  Eigen::MatrixXd v = q * rq.transpose();

  Matrix out = Matrix::dense(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      out.at(i, j) = v(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(j));
  return out;
}

}  // namespace

SuiteResult run_qre_suite(std::size_t trials, std::uint64_t seed,
                          const std::vector<double>& deltas) {
  SuiteResult res;
  res.name = "qre";
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng trial = rng.substream(t);
    const double delta = deltas[t % deltas.size()];
    const std::size_t n = 8 + trial.next_u64() % 53;
    const std::size_t k = 1 + trial.next_u64() % (n / 2);
    Matrix v = controlled_basis(n, k, delta, trial);
    ++res.total;
    try {
      WInnerProduct w = construct_w_inner_product(v);
      const double kappa_bound = (1.0 + w.delta) / (1.0 - w.delta);
      // fp allowance on the bound comparison, documented: 1e-10 relative.
      const bool identity_ok = w.identity_defect <= 1e-10;
      const bool kappa_ok = w.kappa2 <= kappa_bound * (1.0 + 1e-10);
      res.worst_slack = std::max(res.worst_slack, w.identity_defect);
      if (!identity_ok || !kappa_ok) {
        ++res.failed;
        std::ostringstream os;
        os << "qre trial " << t << " n=" << n << " k=" << k
           << " delta=" << delta << " identity_defect=" << fmt(w.identity_defect)
           << " kappa=" << fmt(w.kappa2) << " bound=" << fmt(kappa_bound);
        res.lines.push_back(os.str());
      }
    } catch (const std::exception& e) {
      ++res.failed;
      res.lines.push_back(std::string("qre trial threw: ") + e.what());
    }
  }
  return res;
}

SuiteResult run_stls_suite(std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.name = "stls";
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng trial = rng.substream(t);
    const std::size_t k = 1 + trial.next_u64() % 25;
    Matrix h = Matrix::dense(k + 1, k);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i <= j; ++i) h.at(i, j) = trial.normal();
      h.at(j + 1, j) = std::abs(trial.normal()) + 0.1;
    }
    const double beta = trial.uniform(0.5, 2.0);
    const double eps = std::pow(10.0, trial.uniform(-5.0, -0.3));

    // Admissible D: scale a random nonsingular diagonal to a fraction of
    // the (eq:condD) bound.
    Matrix d = Matrix::dense(k, k);
    double dmax = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double v = (trial.next_double() < 0.5 ? -1.0 : 1.0) *
                       (0.1 + trial.next_double());
      d.at(i, i) = v;
      dmax = std::max(dmax, std::abs(v));
    }
    StlsResult probe = check_stls_lemma(h, beta, d, eps);
    const double target = probe.d_bound * trial.uniform(0.05, 0.999);
    const double scale = target / dmax;
    for (std::size_t i = 0; i < k; ++i) d.at(i, i) *= scale;

    StlsResult r = check_stls_lemma(h, beta, d, eps);
    ++res.total;
    res.worst_slack = std::min(res.worst_slack, r.ejyk_min_slack);
    if (!(r.condition_ok && r.ejyk_ok && r.lower_ok && r.upper_ok)) {
      ++res.failed;
      std::ostringstream os;
      os << "stls trial " << t << " k=" << k << " cond=" << r.condition_ok
         << " ejyk=" << r.ejyk_ok << " lower=" << r.lower_ok
         << " upper=" << r.upper_ok << " sigma=" << fmt(r.sigma) << " in ["
         << fmt(r.lower) << ", " << fmt(r.upper) << "]";
      res.lines.push_back(os.str());
    }
  }
  return res;
}

namespace {

ExperimentConfig nur_run_config(double level, std::uint64_t seed,
                                std::size_t kmax) {
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
  cfg.stop_tol = 1e-300;  // run the full kmax iterations
  // The identity assumes exact normalization; Algorithm 2's perturbed
  // h_{j+1,j} would otherwise add an O(eta h / ||w||^2) defect.
  cfg.normalization_exact = true;
  cfg.kmax = kmax;
  cfg.seed = seed;
  cfg.no_reference = true;
  return cfg;
}

}  // namespace

SuiteResult run_nur_suite(const std::vector<double>& levels,
                          std::uint64_t seed, std::size_t kmax) {
  SuiteResult res;
  res.name = "nur";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    RunArtifacts art = execute(nur_run_config(levels[i], seed + i, kmax));
    const std::size_t k = art.run.k_final;
    ++res.total;
    if (k == 0 || art.run.state.basis.size() < k + 1) {
      ++res.failed;
      res.lines.push_back("nur run ended before any checkable step");
      continue;
    }
    OrthoDiagnostics d = make_ortho_diagnostics(art.run.state, k);
    const double defect = check_nur_identity(d);
    res.worst_slack = std::max(res.worst_slack, defect);
    std::ostringstream os;
    os << "nur level=" << fmt(levels[i]) << " k=" << k
       << " defect=" << fmt(defect);
    res.lines.push_back(os.str());
    if (!(defect <= 1e-8)) ++res.failed;
  }
  return res;
}

SuiteResult run_rgap_suite(std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.name = "rgap";
  const std::vector<double> levels = {1e-4, 1e-6, 1e-8, 1e-10};
  for (std::size_t t = 0; t < trials; ++t) {
    ExperimentConfig cfg =
        nur_run_config(levels[t % levels.size()], seed + t, 60);
    RunArtifacts art = execute(cfg);
    const std::size_t k = art.run.k_final;
    if (k == 0 || art.run.state.basis.size() < k + 1) continue;
    for (std::size_t j = 1; j <= k; j += (k > 60 ? 5 : 1)) {
      GapResult g = residual_gap(art.a, art.b, art.run, j);
      ++res.total;
      // 1e-6 slack for the power-iteration tolerance on the applied
      // ||E_j||_2, plus the binary64 measurement floor.
      if (!g.within_bound()) {
        ++res.failed;
        std::ostringstream os;
        os << "rgap level run " << t << " j=" << j << " gap=" << fmt(g.gap)
           << " bound=" << fmt(g.bound);
        res.lines.push_back(os.str());
      }
      res.worst_slack =
          std::max(res.worst_slack, g.bound > 0 ? g.gap / g.bound : 0.0);
    }
  }

  // Two-pass run with the theorem-rule epsilon choice: the final gap must
  // sit below eps/2 * ||b||.
  {
    ExperimentConfig cfg;
    cfg.matrix.generator = "grcar";
    cfg.matrix.n = 100;
    cfg.matrix.superdiags = 5;
    cfg.mode = InexactMode::Perturbation;
    cfg.threshold = ThresholdMode::Theorem;
    cfg.epsilon = 1e-8;
    cfg.kmax = 100;
    cfg.seed = seed;
    RunArtifacts art = execute(cfg);
    const std::size_t k = art.run.k_final;
    if (k > 0 && art.run.state.basis.size() >= k + 1) {
      GapResult g = residual_gap(art.a, art.b, art.run, k);
      const double budget = 0.5 * cfg.epsilon * norm2(art.b);
      ++res.total;
      std::ostringstream os;
      os << "rgap two-pass gap=" << fmt(g.gap) << " budget=" << fmt(budget);
      res.lines.push_back(os.str());
      if (!(g.gap <= budget)) ++res.failed;
    }
  }
  return res;
}

SuiteResult run_theorem_suite(std::size_t trials, std::uint64_t seed,
                              const std::vector<double>& epsilons) {
  SuiteResult res;
  res.name = "theorem";
  for (std::size_t t = 0; t < trials; ++t) {
    for (double eps : epsilons) {
      ExperimentConfig cfg;
      cfg.matrix.generator = "grcar";
      cfg.matrix.n = 100;
      cfg.matrix.superdiags = 5;
      cfg.mode = InexactMode::Perturbation;
      cfg.threshold = ThresholdMode::Theorem;
      cfg.epsilon = eps;
      cfg.kmax = 100;
      cfg.seed = seed + t;
      RunArtifacts art = execute(cfg);
      TheoremCheck chk = check_theorem_conclusion(
          art.run.report, art.reference->report, eps);
      ++res.total;
      res.worst_slack = std::max(res.worst_slack, chk.worst_ratio);
      std::ostringstream os;
      os << "theorem eps=" << fmt(eps) << " seed=" << seed + t
         << " checked=" << chk.checked << " violations=" << chk.violations;
      res.lines.push_back(os.str());
      if (!chk.ok) ++res.failed;
    }
  }
  return res;
}

}  // namespace vpgmres
