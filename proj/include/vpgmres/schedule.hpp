#pragma once

#include <cstddef>

#include "vpgmres/config.hpp"
#include "vpgmres/precision.hpp"

namespace vpgmres {

/// eta_j = eps * ||b|| / ||t_{j-1}||
double eta_aggressive(double eps, double b_norm, double t_prev);
/// eta_j = sigma_min(A) * eta_aggressive; the ratio to the aggressive value
/// is sigma_min(A) bit-exactly.
double eta_conservative(double eps, double sigma_min_a, double b_norm,
                        double t_prev);
/// eta_j = phi_j * eps * sigma_min(H_k) / sqrt(2) * ||b|| / ||t_{j-1}||,
/// eps in (0,1), sum of phi_j^2 <= 1.
double eta_theorem(double eps, double phi_j, double sigma_min_hk,
                   double b_norm, double t_prev);
/// eps_j = phi_j * eps * sigma_min(H_k) / 2 * ||b|| / ||t_{j-1}||,
/// sum of phi_j <= 1 so the residual gap stays below eps/2 * ||b||.
double epsilon_theorem(double eps, double phi_j, double sigma_min_hk,
                       double b_norm, double t_prev);

/// Per-iteration tolerance rule, resolved against one matrix/rhs pair.
class ToleranceSchedule {
 public:
  static ToleranceSchedule make(const ExperimentConfig& cfg, double a_norm2,
                                double sigma_min_a, double sigma_min_hk,
                                std::size_t kmax);

  double eta(int j, double b_norm, double t_prev) const;
  double eps(int j, double b_norm, double t_prev) const;

  ThresholdMode mode() const { return mode_; }
  double epsilon_abs() const { return epsilon_abs_; }
  double a_norm2() const { return a_norm2_; }
  double phi_eta() const { return phi_eta_; }
  double phi_eps() const { return phi_eps_; }
  double sigma_min_hk() const { return sigma_min_hk_; }

 private:
  ThresholdMode mode_ = ThresholdMode::Aggressive;
  double epsilon_abs_ = 0.0;
  double a_norm2_ = 0.0;
  double sigma_min_a_ = 0.0;
  double sigma_min_hk_ = 0.0;
  double phi_eta_ = 0.0;
  double phi_eps_ = 0.0;
  FixedTable table_;
};

/// Outcome of picking the cheapest admissible floating-point format.
struct PrecisionDecision {
  PrecisionKind kind = PrecisionKind::Binary64;
  double modeled_error = 0.0;
  /// Tolerance below u * ||A||_2: no inexactness is possible at all.
  bool vacuous = false;
};

/// Error models shared by one solve. With coarse_trigger the paper's rule
/// u(f) * ||A||_2 <= tolerance is used for both op kinds; otherwise the
/// per-operation models below apply.
struct PrecisionModel {
  bool coarse = true;
  double a_norm2 = 0.0;
  double a_norm_inf = 0.0;
  std::size_t max_row_entries = 0;
  // ||A - round(A, f)||_2 for binary16, binary32.
  double matrix_rounding_error_16 = 0.0;
  double matrix_rounding_error_32 = 0.0;
};

/// Fine model for a dot: n * u(f) * dot_magnitude_estimate(v, w).
PrecisionDecision select_precision_dot(double tolerance,
                                       const PrecisionModel& model,
                                       std::size_t n, double magnitude);
/// Fine model for a matvec: ||A - round(A,f)||_2 * ||v||_2
///                          + row_entries * u(f) * ||A||_inf * ||v||_inf.
PrecisionDecision select_precision_matvec(double tolerance,
                                          const PrecisionModel& model,
                                          double v_norm2, double v_norm_inf);

}  // namespace vpgmres
