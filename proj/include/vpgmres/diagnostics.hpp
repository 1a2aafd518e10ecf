#pragma once

#include <cstddef>

#include "vpgmres/solver.hpp"

namespace vpgmres {

// Everything in this module recomputes its inputs densely, independent of
// the solver's incremental quantities, so tests cross-validate two code
// paths.

/// ||V^T V - I||_2 via dense SVD of the Gram deviation.
double loss_of_orthogonality(const Matrix& v_columns);
double loss_of_orthogonality(const std::vector<Vector>& basis,
                             std::size_t count);

/// Gram-deviation blocks of a run prefix: F (full), U (strict upper part,
/// k x k), N (recorded MGS perturbations, excluding the normalization
/// ones), R (rows 2..k+1 of H_k).
struct OrthoDiagnostics {
  Matrix f;
  double f_norm = 0.0;
  Matrix u;
  Matrix n;
  Matrix r;
};

OrthoDiagnostics make_ortho_diagnostics(const KrylovState& state,
                                        std::size_t k);

/// Relative defect ||N + U R||_F / max(||N||_F, ||U R||_F, u) of the
/// identity N_k = -U_k R_k. Exact only under exact saxpy/normalization, so
/// binary64 runs carry an O((n+k) u ||A||) absolute noise floor.
double check_nur_identity(const OrthoDiagnostics& diag);

struct WInnerProduct {
  Matrix m;                         // n x n, W = I + M
  double delta = 0.0;               // measured ||V^T V - I||_2
  double kappa2 = 0.0;              // condition number of I + M
  double identity_defect = 0.0;     // max |V^T (I+M) V - I|
  std::vector<double> eigenvalues;  // of I + M, ascending
};

/// M = V (V^T V)^-1 (I - V^T V) (V^T V)^-1 V^T, making the columns of V
/// exactly orthonormal in the (I + M) inner product. Requires delta < 1.
WInnerProduct construct_w_inner_product(const Matrix& v_columns);

struct GapResult {
  double gap = 0.0;    // ||(b - A x_j) - V_{j+1} t_j||_2, dense recompute
  double bound = 0.0;  // ||H_j^+||_2 * sum_i eps_i ||t_{i-1}||_2
  // Binary64 measurement floor 10 u sqrt(j) (||A||_2 ||x_j|| + ||b||): the
  // bound covers only the injected inexactness, while the measured gap also
  // carries the run's and the recompute's rounding.
  double noise_floor = 0.0;

  bool within_bound() const { return gap <= bound * (1 + 1e-6) + noise_floor; }
};

GapResult residual_gap(const Matrix& A, const Vector& b,
                       const SolveOutcome& outcome, std::size_t j);

struct StlsResult {
  bool condition_ok = false;  // ||D||_2 within the admissibility bound
  double d_norm = 0.0;
  double d_bound = 0.0;
  bool ejyk_ok = false;
  double ejyk_min_slack = 0.0;  // min over j of t_{j-1}/sigma_min - |y_j|
  bool lower_ok = false;
  bool upper_ok = false;
  double sigma = 0.0;  // sigma_min([eps^-1 e1, H D^-1])
  double lower = 0.0;
  double upper = 0.0;
};

/// Checks the scaled-total-least-squares sandwich and the |e_j^T y_k| bound
/// for one Hessenberg instance, all via dense SVD.
StlsResult check_stls_lemma(const Matrix& hessenberg, double beta,
                            const Matrix& d, double eps);

struct TheoremCheck {
  bool ok = true;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  std::vector<std::size_t> violating_k;
};

/// Per step k asserts ||r_k|| / ||r_k^(e)|| <= sqrt(3)*(1+slack) or
/// ||t_k||/||b|| <= 6 k eps. The slack absorbs the perturbed normalization
/// and binary64 saxpy, which sit outside the exact-operation assumption.
TheoremCheck check_theorem_conclusion(const SolveReport& run,
                                      const SolveReport& reference, double eps,
                                      double slack = 0.1);

/// Columns v_1..v_count as a dense n x count matrix.
Matrix basis_matrix(const std::vector<Vector>& basis, std::size_t count);

}  // namespace vpgmres
