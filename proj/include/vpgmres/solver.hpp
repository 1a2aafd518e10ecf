#pragma once

#include <optional>

#include "vpgmres/config.hpp"
#include "vpgmres/givens.hpp"
#include "vpgmres/report.hpp"
#include "vpgmres/schedule.hpp"

namespace vpgmres {

/// Everything injected at iteration j, recorded exactly as applied.
struct IterationRecord {
  std::vector<double> etas;    // eta_{ij}, i = 1..j (MGS inner products)
  double eta_norm = 0.0;       // eta_{j+1,j} (normalization inner product)
  bool norm_fallback = false;  // radicand went nonpositive / non-finite
  Vector matvec_perturbation;  // E_j v_j column (perturbation mode)
  double eps_applied = 0.0;    // nominal ||E_j||_2
  double eta_tol = 0.0;
  double eps_tol = 0.0;
  PrecisionKind dot_fmt = PrecisionKind::Binary64;
  PrecisionKind mv_fmt = PrecisionKind::Binary64;
  bool dot_fallback = false;
  bool mv_fallback = false;
  bool vacuous = false;
  // Multiprecision instrumentation: modeled error bound and measured error
  // of each MGS inner product.
  std::vector<double> dot_modeled_err;
  std::vector<double> dot_actual_err;
};

struct KrylovState {
  double beta = 0.0;
  std::vector<Vector> basis;                // v_1 .. v_{k+1}
  std::vector<std::vector<double>> h_cols;  // column j holds h_{1..j+1, j}
  GivensQr lsq{0.0};
  std::vector<IterationRecord> records;

  std::size_t k() const { return h_cols.size(); }
  /// Dense (k+1) x k Hessenberg prefix.
  Matrix hessenberg(std::size_t k) const;
};

struct SolveOutcome {
  Vector x;
  SolveStatus status = SolveStatus::MaxIterations;
  std::size_t k_final = 0;
  SolveReport report;
  KrylovState state;
};

/// Variable-precision GMRES: Arnoldi with MGS, inexact inner products and
/// matrix-vector products per cfg.mode, per-iteration tolerances from the
/// configured threshold rule, incremental Givens least squares, stop test
/// on the recurred residual, x_k = V_k y_k.
///
/// Theorem-mode runs need cfg.sigma_min_hk; run_with_reference fills it
/// from an exact reference pass.
SolveOutcome gmres_solve(const Matrix& A, const Vector& b,
                         const ExperimentConfig& cfg);

/// The same driver with all inexactness disabled (plain binary64 GMRES).
SolveOutcome reference_exact_solve(const Matrix& A, const Vector& b,
                                   std::size_t kmax,
                                   std::optional<double> stop_tol = {});

/// x_j = V_j y_j with y_j from the Givens-reduced system at step j.
Vector reconstruct_iterate(const KrylovState& state, std::size_t j);

/// ||A||_2 for tolerance scaling: power iteration, falling back to a dense
/// SVD when the top singular values are too clustered to certify.
double operator_norm2(const Matrix& A);

}  // namespace vpgmres
