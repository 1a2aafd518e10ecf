#pragma once

#include <string>
#include <vector>

#include "vpgmres/precision.hpp"

namespace vpgmres {

enum class SolveStatus { Converged, Breakdown, MaxIterations, NumericalFailure };
const char* to_string(SolveStatus);

struct IterationRow {
  int j = 0;
  double rel_resid_recurred = 0.0;  // ||t_j|| / ||b||
  double rel_resid_true = 0.0;      // ||b - A x_j|| / ||b||
  double f_norm = 0.0;              // ||V_{j+1}^T V_{j+1} - I||_2
  double eta_j = 0.0;               // inner-product tolerance
  double eps_j = 0.0;               // matvec tolerance
  PrecisionKind dot_fmt = PrecisionKind::Binary64;
  PrecisionKind mv_fmt = PrecisionKind::Binary64;
};

/// Per-iteration telemetry of one solve, plus free-form provenance comment
/// lines emitted at the top of the CSV.
struct SolveReport {
  std::vector<IterationRow> rows;
  SolveStatus status = SolveStatus::MaxIterations;
  double b_norm = 0.0;
  double a_norm2 = 0.0;
  std::vector<std::string> provenance;
  std::vector<std::pair<std::string, std::string>> diagnostics;
};

/// Header plus one row per iteration; '#' comment lines carry provenance
/// and the final status. Reals are written in shortest round-trip decimal
/// form; LF line endings.
void write_report_csv(const SolveReport& report, const std::string& path);
std::string report_csv_text(const SolveReport& report);

/// Key/value diagnostics companion file (same stem, .diag.csv).
void write_diagnostics_csv(const SolveReport& report, const std::string& path);

std::string format_double(double v);

}  // namespace vpgmres
