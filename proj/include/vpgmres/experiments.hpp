#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vpgmres/diagnostics.hpp"
#include "vpgmres/solver.hpp"

namespace vpgmres {

struct RunArtifacts {
  ExperimentConfig cfg;  // as executed (theorem sigma filled in)
  Matrix a;
  Vector b;
  SolveOutcome run;
  std::optional<SolveOutcome> reference;
};

/// Loads the matrix and rhs, runs the solve plus the double-precision
/// reference (unless cfg.no_reference), resolving theorem-mode
/// sigma_min(H_k) from the reference pass when not supplied.
RunArtifacts execute(const ExperimentConfig& cfg);

/// Writes stem.csv, stem-reference.csv and stem.diag.csv, appending summary
/// diagnostics to the run report first.
void write_outputs(RunArtifacts& artifacts, const std::string& stem);

struct NamedRun {
  std::string suffix;  // "" or "-conservative"/"-aggressive"
  ExperimentConfig cfg;
  std::vector<std::string> notes;  // provenance lines for the CSV header
};

/// Preconfigured runs of a named experiment. The 494-bus experiments
/// require matrix_path; the Grcar ones generate their operator internally.
std::vector<NamedRun> experiment_runs(const std::string& name,
                                      const std::string& matrix_path,
                                      std::uint64_t seed);

std::vector<std::string> experiment_names();

}  // namespace vpgmres
