#include "vpgmres/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "vpgmres/report.hpp"
#include "vpgmres/spectral.hpp"

namespace vpgmres {

RunArtifacts execute(const ExperimentConfig& cfg) {
  RunArtifacts art;
  art.cfg = cfg;
  art.a = load_matrix(cfg.matrix);
  art.b = build_rhs(cfg, art.a);
  const std::size_t kmax = cfg.kmax == 0 ? art.a.nrows() : cfg.kmax;

  const bool needs_reference =
      !cfg.no_reference || (cfg.threshold == ThresholdMode::Theorem &&
                            cfg.sigma_min_hk == 0.0 &&
                            cfg.mode != InexactMode::Exact);
  if (needs_reference) {
    // Match the inexact run's stopping rule so the curves are comparable.
    double stop = 0.0;
    if (cfg.stop_tol) {
      stop = *cfg.stop_tol;
    } else {
      const double a_norm = cfg.relative_epsilon ? operator_norm2(art.a) : 1.0;
      stop = (cfg.relative_epsilon ? cfg.epsilon * a_norm : cfg.epsilon) *
             norm2(art.b);
      if (cfg.stop_at_theorem_floor)
        stop *= 6.0 * static_cast<double>(kmax);
    }
    art.reference = reference_exact_solve(art.a, art.b, kmax, stop);
  }

  if (cfg.threshold == ThresholdMode::Theorem && cfg.sigma_min_hk == 0.0 &&
      cfg.mode != InexactMode::Exact) {
    const KrylovState& ref_state = art.reference->state;
    if (ref_state.k() == 0)
      throw std::runtime_error("execute: reference pass produced no steps");
    // sigma_min(H_k) is non-increasing in k, so the final step's value
    // bounds every prefix used by the tolerance rule.
    art.cfg.sigma_min_hk = sigma_min(ref_state.hessenberg(ref_state.k()));
  }

  art.run = gmres_solve(art.a, art.b, art.cfg);
  return art;
}

namespace {

void append_diagnostics(RunArtifacts& art) {
  SolveReport& rep = art.run.report;
  const SolveOutcome& run = art.run;
  rep.diagnostics.emplace_back("k_final", std::to_string(run.k_final));
  if (!rep.rows.empty()) {
    rep.diagnostics.emplace_back(
        "final_rel_resid_recurred",
        format_double(rep.rows.back().rel_resid_recurred));
    rep.diagnostics.emplace_back("final_rel_resid_true",
                                 format_double(rep.rows.back().rel_resid_true));
    double max_f = 0.0;
    for (const IterationRow& r : rep.rows) max_f = std::max(max_f, r.f_norm);
    rep.diagnostics.emplace_back("max_F_norm", format_double(max_f));
  }
  rep.diagnostics.emplace_back("b_norm", format_double(rep.b_norm));
  rep.diagnostics.emplace_back("a_norm2", format_double(rep.a_norm2));

  std::size_t fallbacks = 0;
  for (const IterationRecord& rec : run.state.records)
    if (rec.norm_fallback) ++fallbacks;
  rep.diagnostics.emplace_back("normalization_fallbacks",
                               std::to_string(fallbacks));

  if (art.cfg.mode == InexactMode::Perturbation && run.k_final > 0 &&
      run.state.basis.size() >= run.k_final + 1) {
    const GapResult g = residual_gap(art.a, art.b, run, run.k_final);
    rep.diagnostics.emplace_back("residual_gap_final", format_double(g.gap));
    rep.diagnostics.emplace_back("residual_gap_bound", format_double(g.bound));
    const OrthoDiagnostics d = make_ortho_diagnostics(run.state, run.k_final);
    rep.diagnostics.emplace_back("nur_defect", format_double(check_nur_identity(d)));
    rep.diagnostics.emplace_back("F_norm_svd", format_double(d.f_norm));
  }
  if (art.cfg.threshold == ThresholdMode::Theorem)
    rep.diagnostics.emplace_back("sigma_min_hk_used",
                                 format_double(art.cfg.sigma_min_hk));
}

}  // namespace

void write_outputs(RunArtifacts& artifacts, const std::string& stem) {
  RunArtifacts& art = artifacts;
  append_diagnostics(art);
  write_report_csv(art.run.report, stem + ".csv");
  write_diagnostics_csv(art.run.report, stem + ".diag.csv");
  if (art.reference)
    write_report_csv(art.reference->report, stem + "-reference.csv");
}

std::vector<std::string> experiment_names() {
  return {"example1a",         "example1b",         "example2a",
          "example2b",         "multiprec-494-eps6", "multiprec-494-eps12"};
}

namespace {

const double kEps52 = std::ldexp(1.0, -52);

ExperimentConfig grcar_base(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.matrix.generator = "grcar";
  cfg.matrix.n = 100;
  cfg.matrix.superdiags = 5;
  cfg.rhs = RhsRule::Sine;
  cfg.kmax = 100;
  cfg.seed = seed;
  cfg.mode = InexactMode::Perturbation;
  return cfg;
}

ExperimentConfig bus_base(const std::string& matrix_path, std::uint64_t seed) {
  if (matrix_path.empty())
    throw ConfigError(
        "this experiment needs the 494_bus matrix: pass --matrix <file.mtx>");
  ExperimentConfig cfg;
  cfg.matrix.file = matrix_path;
  cfg.rhs = RhsRule::Sine;
  cfg.seed = seed;
  // The published curves span roughly 250 to 300 iterations.
  cfg.kmax = 300;
  return cfg;
}

std::vector<std::string> grcar_notes() {
  return {"matrix: grcar n=100 superdiags=5 ('order 5' read as the "
          "superdiagonal count)",
          "rhs: b = A*[sin(1)..sin(100)]"};
}

std::vector<std::string> bus_notes() {
  return {"rhs: b = A*[sin(1)..sin(n)] with n the matrix order (the stated "
          "length-100 vector is dimensionally inconsistent)"};
}

}  // namespace

std::vector<NamedRun> experiment_runs(const std::string& name,
                                      const std::string& matrix_path,
                                      std::uint64_t seed) {
  std::vector<NamedRun> runs;
  if (name == "example1a") {
    ExperimentConfig cfg = grcar_base(seed);
    cfg.threshold = ThresholdMode::FixedTable;
    cfg.table.relative = true;
    cfg.table.default_value = kEps52;
    cfg.table.ranges = {{20, 30, 1e-8}, {40, 50, 1e-4}};
    cfg.epsilon = kEps52;
    cfg.relative_epsilon = true;
    cfg.stop_at_theorem_floor = true;
    NamedRun r{"", cfg, grcar_notes()};
    r.notes.push_back(
        "tolerances: eta_j = eps_j = 1e-8*||A|| for 20<=j<=30, 1e-4*||A|| "
        "for 40<=j<=50, 2^-52*||A|| otherwise");
    r.notes.push_back(
        "stop: 6*Kmax*eps*||b|| (attainable level; eps itself is below the "
        "floor of the inexact run)");
    runs.push_back(std::move(r));
  } else if (name == "example1b") {
    ExperimentConfig cfg = grcar_base(seed);
    cfg.threshold = ThresholdMode::Aggressive;
    cfg.epsilon = kEps52;
    cfg.relative_epsilon = true;
    cfg.stop_at_theorem_floor = true;
    NamedRun r{"", cfg, grcar_notes()};
    r.notes.push_back(
        "stop: 6*Kmax*eps*||b|| (attainable level; eps itself is below the "
        "floor of the inexact run)");
    runs.push_back(std::move(r));
  } else if (name == "example2a" || name == "example2b") {
    ExperimentConfig cfg = bus_base(matrix_path, seed);
    cfg.mode = InexactMode::Perturbation;
    cfg.threshold = name == "example2a" ? ThresholdMode::Aggressive
                                        : ThresholdMode::Conservative;
    cfg.epsilon = kEps52;
    cfg.relative_epsilon = true;
    cfg.stop_at_theorem_floor = true;
    NamedRun r{"", cfg, bus_notes()};
    r.notes.push_back(
        "stop: 6*Kmax*eps*||b|| (attainable level; eps itself is below the "
        "floor of the inexact run)");
    runs.push_back(std::move(r));
  } else if (name == "multiprec-494-eps6" || name == "multiprec-494-eps12") {
    const double eps = name == "multiprec-494-eps6" ? 1e-6 : 1e-12;
    for (const char* variant : {"conservative", "aggressive"}) {
      ExperimentConfig cfg = bus_base(matrix_path, seed);
      cfg.mode = InexactMode::Multiprecision;
      cfg.threshold = std::string(variant) == "conservative"
                          ? ThresholdMode::Conservative
                          : ThresholdMode::Aggressive;
      cfg.epsilon = eps;
      cfg.relative_epsilon = true;
      cfg.coarse_trigger = true;
      cfg.kmax = 494;  // multiprecision runs are cheap; keep the full sweep
      NamedRun r{std::string("-") + variant, cfg, bus_notes()};
      r.notes.push_back(
          "precision rule: switch once the threshold exceeds u(low)*||A||_2");
      runs.push_back(std::move(r));
    }
  } else {
    throw ConfigError("unknown experiment '" + name + "'");
  }
  return runs;
}

}  // namespace vpgmres
