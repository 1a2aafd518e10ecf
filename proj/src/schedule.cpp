#include "vpgmres/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace vpgmres {

namespace {

void check_eta_inputs(double eps, double b_norm, double t_prev) {
  if (eps <= 0.0 || b_norm <= 0.0)
    throw std::invalid_argument("tolerance rule: inputs must be > 0");
  if (t_prev == 0.0)
    throw std::logic_error(
        "tolerance rule: ||t_{j-1}|| = 0, the solve should have stopped");
  if (t_prev < 0.0)
    throw std::invalid_argument("tolerance rule: negative residual norm");
}

constexpr double kSqrt2 = 1.4142135623730951;

}  // namespace

double eta_aggressive(double eps, double b_norm, double t_prev) {
  check_eta_inputs(eps, b_norm, t_prev);
  return eps * b_norm / t_prev;
}

double eta_conservative(double eps, double sigma_min_a, double b_norm,
                        double t_prev) {
  if (sigma_min_a <= 0.0)
    throw std::invalid_argument("eta_conservative: sigma_min(A) must be > 0");
  return sigma_min_a * eta_aggressive(eps, b_norm, t_prev);
}

double eta_theorem(double eps, double phi_j, double sigma_min_hk,
                   double b_norm, double t_prev) {
  if (eps >= 1.0)
    throw std::invalid_argument("eta_theorem: eps must be in (0,1)");
  if (phi_j <= 0.0 || sigma_min_hk <= 0.0)
    throw std::invalid_argument("eta_theorem: phi and sigma_min must be > 0");
  check_eta_inputs(eps, b_norm, t_prev);
  return phi_j * eps * sigma_min_hk / kSqrt2 * (b_norm / t_prev);
}

double epsilon_theorem(double eps, double phi_j, double sigma_min_hk,
                       double b_norm, double t_prev) {
  if (eps >= 1.0)
    throw std::invalid_argument("epsilon_theorem: eps must be in (0,1)");
  if (phi_j <= 0.0 || sigma_min_hk <= 0.0)
    throw std::invalid_argument(
        "epsilon_theorem: phi and sigma_min must be > 0");
  check_eta_inputs(eps, b_norm, t_prev);
  return phi_j * eps * sigma_min_hk / 2.0 * (b_norm / t_prev);
}

ToleranceSchedule ToleranceSchedule::make(const ExperimentConfig& cfg,
                                          double a_norm2, double sigma_min_a,
                                          double sigma_min_hk,
                                          std::size_t kmax) {
  ToleranceSchedule s;
  s.mode_ = cfg.threshold;
  s.a_norm2_ = a_norm2;
  s.epsilon_abs_ = cfg.relative_epsilon ? cfg.epsilon * a_norm2 : cfg.epsilon;
  s.sigma_min_a_ = sigma_min_a;
  s.sigma_min_hk_ = sigma_min_hk;
  if (kmax == 0) throw std::invalid_argument("ToleranceSchedule: kmax >= 1");
  s.phi_eta_ = cfg.phi_eta > 0.0
                   ? cfg.phi_eta
                   : 1.0 / std::sqrt(static_cast<double>(kmax));
  s.phi_eps_ = cfg.phi_eps > 0.0 ? cfg.phi_eps
                                 : 1.0 / static_cast<double>(kmax);
  s.table_ = cfg.table;
  if (s.mode_ == ThresholdMode::Conservative && sigma_min_a <= 0.0)
    throw std::invalid_argument(
        "ToleranceSchedule: conservative mode needs sigma_min(A)");
  if (s.mode_ == ThresholdMode::Theorem && sigma_min_hk <= 0.0)
    throw std::invalid_argument(
        "ToleranceSchedule: theorem mode needs sigma_min(H_k)");
  return s;
}

double ToleranceSchedule::eta(int j, double b_norm, double t_prev) const {
  switch (mode_) {
    case ThresholdMode::Aggressive:
      return eta_aggressive(epsilon_abs_, b_norm, t_prev);
    case ThresholdMode::Conservative:
      return eta_conservative(epsilon_abs_, sigma_min_a_, b_norm, t_prev);
    case ThresholdMode::Theorem:
      return eta_theorem(epsilon_abs_, phi_eta_, sigma_min_hk_, b_norm,
                         t_prev);
    case ThresholdMode::FixedTable: {
      const double v = table_value(table_, j);
      return table_.relative ? v * a_norm2_ : v;
    }
  }
  throw std::logic_error("unreachable threshold mode");
}

double ToleranceSchedule::eps(int j, double b_norm, double t_prev) const {
  // Matvec and inner products share the aggressive/conservative thresholds
  // and the fixed table; theorem mode uses its own phi normalization.
  if (mode_ == ThresholdMode::Theorem)
    return epsilon_theorem(epsilon_abs_, phi_eps_, sigma_min_hk_, b_norm,
                           t_prev);
  return eta(j, b_norm, t_prev);
}

namespace {

PrecisionDecision pick(double tolerance, double err16, double err32,
                       double a_norm2) {
  PrecisionDecision d;
  d.vacuous = tolerance < kBinary64.unit_roundoff * a_norm2;
  if (err16 <= tolerance) {
    d.kind = PrecisionKind::Binary16;
    d.modeled_error = err16;
  } else if (err32 <= tolerance) {
    d.kind = PrecisionKind::Binary32;
    d.modeled_error = err32;
  } else {
    d.kind = PrecisionKind::Binary64;
    d.modeled_error = 0.0;  // working precision is always admissible
  }
  return d;
}

}  // namespace

PrecisionDecision select_precision_dot(double tolerance,
                                       const PrecisionModel& model,
                                       std::size_t n, double magnitude) {
  if (tolerance <= 0.0)
    throw std::invalid_argument("select_precision: tolerance must be > 0");
  if (model.coarse)
    return pick(tolerance, kBinary16.unit_roundoff * model.a_norm2,
                kBinary32.unit_roundoff * model.a_norm2, model.a_norm2);
  const double nd = static_cast<double>(n);
  return pick(tolerance, nd * kBinary16.unit_roundoff * magnitude,
              nd * kBinary32.unit_roundoff * magnitude, model.a_norm2);
}

PrecisionDecision select_precision_matvec(double tolerance,
                                          const PrecisionModel& model,
                                          double v_norm2, double v_norm_inf) {
  if (tolerance <= 0.0)
    throw std::invalid_argument("select_precision: tolerance must be > 0");
  if (model.coarse)
    return pick(tolerance, kBinary16.unit_roundoff * model.a_norm2,
                kBinary32.unit_roundoff * model.a_norm2, model.a_norm2);
  const double rows = static_cast<double>(model.max_row_entries);
  const double err16 = model.matrix_rounding_error_16 * v_norm2 +
                       rows * kBinary16.unit_roundoff * model.a_norm_inf *
                           v_norm_inf;
  const double err32 = model.matrix_rounding_error_32 * v_norm2 +
                       rows * kBinary32.unit_roundoff * model.a_norm_inf *
                           v_norm_inf;
  return pick(tolerance, err16, err32, model.a_norm2);
}

}  // namespace vpgmres
