#include "vpgmres/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "vpgmres/inexact.hpp"
#include "vpgmres/rng.hpp"
#include "vpgmres/spectral.hpp"

namespace vpgmres {

Matrix KrylovState::hessenberg(std::size_t kk) const {
  if (kk == 0 || kk > h_cols.size())
    throw std::out_of_range("KrylovState::hessenberg: bad prefix");
  Matrix h = Matrix::dense(kk + 1, kk);
  for (std::size_t j = 0; j < kk; ++j)
    for (std::size_t i = 0; i < h_cols[j].size() && i <= kk; ++i)
      h.at(i, j) = h_cols[j][i];
  return h;
}

double operator_norm2(const Matrix& A) {
  try {
    return matrix_norm2(A, 1e-8, 20000);
  } catch (const NormEstimateError&) {
    // Clustered top of the spectrum; certify with a dense SVD instead.
    return spectral_norm_svd(A);
  }
}

namespace {

// Tracks G = V^T V and reports ||G - I||_2 after each new basis vector.
class GramTracker {
 public:
  void add(const std::vector<Vector>& basis) {
    const std::size_t m = basis.size();
    std::vector<double> next(m * m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = 0; j + 1 < m; ++j)
        next[i * m + j] = gram_[i * (m - 1) + j];
    for (std::size_t i = 0; i < m; ++i) {
      const double g = dot(basis[i], basis[m - 1]);
      next[i * m + (m - 1)] = g;
      next[(m - 1) * m + i] = g;
    }
    gram_ = std::move(next);
    dim_ = m;
  }

  double f_norm2() {
    std::vector<double> dev(gram_);
    for (std::size_t i = 0; i < dim_; ++i) dev[i * dim_ + i] -= 1.0;
    return estimator_.estimate(dev, dim_);
  }

 private:
  std::vector<double> gram_;
  std::size_t dim_ = 0;
  SymmetricNormEstimator estimator_;
};

PrecisionKind next_higher(PrecisionKind k) {
  return k == PrecisionKind::Binary16 ? PrecisionKind::Binary32
                                      : PrecisionKind::Binary64;
}

PrecisionKind finest(PrecisionKind a, PrecisionKind b) {
  return static_cast<int>(a) >= static_cast<int>(b) ? a : b;
}

bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

struct SolveContext {
  InexactMode mode;
  std::optional<ToleranceSchedule> schedule;
  PrecisionModel model;
  RoundedMatrixCache* cache = nullptr;
  Rng rng;
  bool economy = false;
  double a_norm2 = 0.0;
};

}  // namespace

SolveOutcome gmres_solve(const Matrix& A, const Vector& b,
                         const ExperimentConfig& cfg) {
  if (A.nrows() != A.ncols())
    throw std::invalid_argument("gmres_solve: matrix must be square");
  if (A.nrows() != b.size())
    throw std::invalid_argument("gmres_solve: rhs length mismatch");
  const double b_norm = norm2(b);
  if (!(b_norm > 0.0))
    throw std::invalid_argument("gmres_solve: rhs must be nonzero");

  const std::size_t n = A.nrows();
  const std::size_t kmax = cfg.kmax == 0 ? n : cfg.kmax;

  SolveContext ctx;
  ctx.mode = cfg.mode;
  ctx.rng = Rng(cfg.seed);
  ctx.economy = cfg.economy_perturbation;

  const bool needs_a_norm =
      cfg.mode != InexactMode::Exact || cfg.relative_epsilon ||
      (cfg.threshold == ThresholdMode::FixedTable && cfg.table.relative);
  ctx.a_norm2 = needs_a_norm ? operator_norm2(A) : 0.0;

  double sigma_min_a = 0.0;
  if (cfg.mode != InexactMode::Exact &&
      cfg.threshold == ThresholdMode::Conservative)
    sigma_min_a = sigma_min(A);

  if (cfg.mode != InexactMode::Exact) {
    ctx.schedule.emplace(ToleranceSchedule::make(
        cfg, ctx.a_norm2, sigma_min_a, cfg.sigma_min_hk, kmax));
  }

  RoundedMatrixCache cache(A);
  if (cfg.mode == InexactMode::Multiprecision) {
    ctx.cache = &cache;
    ctx.model.coarse = cfg.coarse_trigger;
    ctx.model.a_norm2 = ctx.a_norm2;
    ctx.model.a_norm_inf = norm_inf_rows(A);
    ctx.model.max_row_entries = A.max_row_entries();
    if (!cfg.coarse_trigger) {
      const double inf = std::numeric_limits<double>::infinity();
      try {
        ctx.model.matrix_rounding_error_16 =
            cache.rounding_error(PrecisionKind::Binary16);
      } catch (const FormatOverflowError&) {
        ctx.model.matrix_rounding_error_16 = inf;  // format never admissible
      }
      try {
        ctx.model.matrix_rounding_error_32 =
            cache.rounding_error(PrecisionKind::Binary32);
      } catch (const FormatOverflowError&) {
        ctx.model.matrix_rounding_error_32 = inf;
      }
    }
  }

  const double epsilon_abs =
      cfg.relative_epsilon ? cfg.epsilon * ctx.a_norm2 : cfg.epsilon;
  const double default_stop =
      cfg.stop_at_theorem_floor
          ? 6.0 * static_cast<double>(kmax) * epsilon_abs * b_norm
          : epsilon_abs * b_norm;
  const double stop_tol = cfg.stop_tol.value_or(default_stop);

  SolveOutcome out;
  out.report.b_norm = b_norm;
  out.report.a_norm2 = ctx.a_norm2;
  out.report.provenance.push_back(
      std::string("mode: ") + to_string(cfg.mode) +
      " threshold: " + to_string(cfg.threshold));
  out.report.provenance.push_back(
      "epsilon: " + format_double(cfg.epsilon) +
      (cfg.relative_epsilon ? " (scaled by ||A||_2 = " +
                                  format_double(ctx.a_norm2) + ")"
                            : " (absolute)"));
  out.report.provenance.push_back(
      "seed: " + std::to_string(cfg.seed) + " kmax: " + std::to_string(kmax) +
      " stop_tol: " + format_double(stop_tol));

  KrylovState& st = out.state;
  st.beta = std::sqrt(dot(b, b));
  st.lsq = GivensQr(st.beta);
  st.basis.push_back(scaled(b, 1.0 / st.beta));

  GramTracker gram;
  gram.add(st.basis);

  SolveStatus status = SolveStatus::MaxIterations;
  std::size_t k_final = 0;

  for (std::size_t j = 1; j <= kmax; ++j) {
    Rng iter_rng = ctx.rng.substream(j);
    IterationRecord rec;
    const double t_prev = st.lsq.t_history()[j - 1];

    double eta_j = 0.0, eps_j = 0.0;
    if (ctx.schedule) {
      eta_j = ctx.schedule->eta(static_cast<int>(j), b_norm, t_prev);
      eps_j = cfg.matvec_exact
                  ? 0.0
                  : ctx.schedule->eps(static_cast<int>(j), b_norm, t_prev);
    }
    rec.eta_tol = eta_j;
    rec.eps_tol = eps_j;
    if (ctx.a_norm2 > 0.0)
      rec.vacuous = eta_j < kBinary64.unit_roundoff * ctx.a_norm2;

    const Vector& vj = st.basis.back();

    // --- matrix-vector product -----------------------------------------
    Vector w;
    if (ctx.mode == InexactMode::Perturbation && eps_j > 0.0) {
      PerturbedMatvec pm =
          perturbed_matvec(A, vj, eps_j, iter_rng, ctx.economy);
      w = std::move(pm.w);
      rec.eps_applied = pm.applied_norm;
      rec.matvec_perturbation = std::move(pm.perturbation);
    } else if (ctx.mode == InexactMode::Multiprecision && eps_j > 0.0) {
      PrecisionDecision d = select_precision_matvec(eps_j, ctx.model,
                                                    norm2(vj), norm_inf(vj));
      PrecisionKind kind = d.kind;
      for (;;) {
        bool finite = false;
        try {
          w = lowprec_matvec(ctx.cache->rounded(kind), vj, format_of(kind));
          finite = all_finite(w);
        } catch (const FormatOverflowError&) {
          // matrix itself does not fit in this format
        }
        if (finite) break;
        kind = next_higher(kind);
        rec.mv_fallback = true;
      }
      rec.mv_fmt = kind;
    } else {
      w = matvec(A, vj);
      if (ctx.mode == InexactMode::Perturbation)
        rec.matvec_perturbation = Vector(n, 0.0);
    }

    // --- MGS loop with inexact inner products ---------------------------
    Vector h_col(j + 1, 0.0);
    PrecisionKind dot_label = PrecisionKind::Binary16;
    for (std::size_t i = 0; i < j; ++i) {
      double h = 0.0;
      if (ctx.mode == InexactMode::Perturbation) {
        PerturbedDot pd = perturbed_dot(st.basis[i], w, eta_j, iter_rng);
        h = pd.value;
        rec.etas.push_back(pd.eta);
        dot_label = PrecisionKind::Binary64;
      } else if (ctx.mode == InexactMode::Multiprecision) {
        PrecisionDecision d = select_precision_dot(
            eta_j, ctx.model, n, dot_magnitude_estimate(st.basis[i], w));
        PrecisionKind kind = d.kind;
        for (;;) {
          h = lowprec_dot(st.basis[i], w, format_of(kind));
          if (std::isfinite(h)) break;
          kind = next_higher(kind);
          rec.dot_fallback = true;
        }
        dot_label = finest(dot_label, kind);
        rec.dot_modeled_err.push_back(d.modeled_error);
        rec.dot_actual_err.push_back(std::abs(h - dot(st.basis[i], w)));
      } else {
        h = dot(st.basis[i], w);
        dot_label = PrecisionKind::Binary64;
      }
      h_col[i] = h;
      axpy(-h, st.basis[i], w);
    }

    // --- normalization inner product ------------------------------------
    double radicand = 0.0;
    if (ctx.mode == InexactMode::Perturbation && !cfg.normalization_exact) {
      PerturbedDot pd = perturbed_dot(w, w, eta_j, iter_rng);
      radicand = pd.value;
      rec.eta_norm = pd.eta;
      if (!(radicand > 0.0)) {
        radicand = dot(w, w);
        rec.eta_norm = 0.0;
        rec.norm_fallback = true;
      }
    } else if (ctx.mode == InexactMode::Multiprecision) {
      PrecisionDecision d = select_precision_dot(
          eta_j, ctx.model, n, dot_magnitude_estimate(w, w));
      PrecisionKind kind = d.kind;
      for (;;) {
        radicand = lowprec_dot(w, w, format_of(kind));
        if (std::isfinite(radicand)) break;
        kind = next_higher(kind);
        rec.dot_fallback = true;
      }
      dot_label = finest(dot_label, kind);
      if (!(radicand > 0.0) && dot(w, w) > 0.0) {
        radicand = dot(w, w);
        rec.norm_fallback = true;
      }
    } else {
      radicand = dot(w, w);
    }
    const double h_sub = std::sqrt(std::max(radicand, 0.0));
    h_col[j] = h_sub;
    rec.dot_fmt = dot_label;

    if (!all_finite(h_col)) {
      st.records.push_back(std::move(rec));
      status = SolveStatus::NumericalFailure;
      k_final = j - 1;
      break;
    }

    // Breakdown threshold: exact zeros do not occur in floating point.
    const bool breakdown = h_sub <= 1e-30;

    // --- incremental least squares --------------------------------------
    Vector above(h_col.begin(), h_col.end() - 1);
    const double t_j = st.lsq.add_column(above, h_sub);
    st.h_cols.push_back(std::move(h_col));

    if (!breakdown) {
      st.basis.push_back(scaled(w, 1.0 / h_sub));
      gram.add(st.basis);
    }
    st.records.push_back(std::move(rec));
    k_final = j;

    IterationRow row;
    row.j = static_cast<int>(j);
    row.rel_resid_recurred = t_j / b_norm;
    {
      Vector xj = reconstruct_iterate(st, j);
      Vector r = matvec(A, xj);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
      row.rel_resid_true = norm2(r) / b_norm;
    }
    row.f_norm = gram.f_norm2();
    row.eta_j = st.records.back().eta_tol;
    row.eps_j = st.records.back().eps_tol;
    row.dot_fmt = st.records.back().dot_fmt;
    row.mv_fmt = st.records.back().mv_fmt;
    out.report.rows.push_back(row);

    if (!std::isfinite(t_j)) {
      status = SolveStatus::NumericalFailure;
      break;
    }
    if (breakdown) {
      status = SolveStatus::Breakdown;
      break;
    }
    if (t_j < stop_tol) {
      status = SolveStatus::Converged;
      break;
    }
  }

  out.status = status;
  out.k_final = k_final;
  out.report.status = status;
  out.x = k_final > 0 ? reconstruct_iterate(st, k_final) : Vector(n, 0.0);
  return out;
}

SolveOutcome reference_exact_solve(const Matrix& A, const Vector& b,
                                   std::size_t kmax,
                                   std::optional<double> stop_tol) {
  ExperimentConfig cfg;
  cfg.mode = InexactMode::Exact;
  cfg.kmax = kmax;
  cfg.epsilon = 1.0;  // placeholder; stop_tol is absolute below
  cfg.relative_epsilon = false;
  cfg.stop_tol = stop_tol.value_or(1e-300);
  return gmres_solve(A, b, cfg);
}

Vector reconstruct_iterate(const KrylovState& state, std::size_t j) {
  if (j == 0 || j > state.k())
    throw std::out_of_range("reconstruct_iterate: step out of range");
  const Vector y = state.lsq.solve(j);
  Vector x(state.basis[0].size(), 0.0);
  for (std::size_t i = 0; i < j; ++i) axpy(y[i], state.basis[i], x);
  return x;
}

}  // namespace vpgmres
