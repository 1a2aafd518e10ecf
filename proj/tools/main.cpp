#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vpgmres/experiments.hpp"
#include "vpgmres/generators.hpp"
#include "vpgmres/matrix_market.hpp"
#include "vpgmres/verify.hpp"

namespace {

using namespace vpgmres;

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
    case SolveStatus::Breakdown:  // happy breakdown: exact solution reached
      return 0;
    case SolveStatus::MaxIterations: return 2;
    default: return 3;
  }
}

std::string default_out_dir() {
  if (const char* env = std::getenv("VPGMRES_OUT_DIR")) return env;
  return ".";
}

std::string resolve_stem(const std::string& out, const std::string& name) {
  if (!out.empty()) return out;
  return default_out_dir() + "/" + name;
}

struct Overrides {
  std::string matrix;
  double epsilon = 0.0;
  bool relative_epsilon = false;
  bool relative_epsilon_set = false;
  std::string mode;
  std::string threshold;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t kmax = 0;
  bool no_reference = false;
};

void apply(const Overrides& ov, ExperimentConfig& cfg) {
  if (!ov.matrix.empty()) {
    cfg.matrix = MatrixSource{};
    cfg.matrix.file = ov.matrix;
  }
  if (ov.epsilon > 0.0) cfg.epsilon = ov.epsilon;
  if (ov.relative_epsilon_set) cfg.relative_epsilon = ov.relative_epsilon;
  if (!ov.mode.empty()) {
    if (ov.mode == "exact") cfg.mode = InexactMode::Exact;
    else if (ov.mode == "perturbation") cfg.mode = InexactMode::Perturbation;
    else if (ov.mode == "multiprecision")
      cfg.mode = InexactMode::Multiprecision;
    else throw ConfigError("unknown mode '" + ov.mode + "'");
  }
  if (!ov.threshold.empty()) {
    if (ov.threshold == "aggressive")
      cfg.threshold = ThresholdMode::Aggressive;
    else if (ov.threshold == "conservative")
      cfg.threshold = ThresholdMode::Conservative;
    else if (ov.threshold == "theorem") cfg.threshold = ThresholdMode::Theorem;
    else if (ov.threshold == "fixed-table")
      cfg.threshold = ThresholdMode::FixedTable;
    else throw ConfigError("unknown threshold '" + ov.threshold + "'");
  }
  if (ov.seed_set) cfg.seed = ov.seed;
  if (ov.kmax > 0) cfg.kmax = ov.kmax;
  if (ov.no_reference) cfg.no_reference = true;
}

void add_override_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--matrix", ov.matrix, "Matrix Market file overriding the "
                                         "configured source");
  cmd->add_option("--epsilon", ov.epsilon, "tolerance scalar epsilon");
  cmd->add_flag("--relative-epsilon,!--no-relative-epsilon",
                [&ov](std::int64_t count) {
                  ov.relative_epsilon_set = true;
                  ov.relative_epsilon = count > 0;
                },
                "scale epsilon by ||A||_2");
  cmd->add_option("--mode", ov.mode,
                  "exact | perturbation | multiprecision");
  cmd->add_option("--threshold", ov.threshold,
                  "aggressive | conservative | theorem | fixed-table");
  cmd->add_option("--seed", ov.seed, "rng seed")->each([&ov](const std::string&) {
    ov.seed_set = true;
  });
  cmd->add_option("--kmax", ov.kmax, "maximum iterations");
  cmd->add_flag("--no-reference", ov.no_reference,
                "skip the double-precision reference run");
}

int run_solve(const std::string& config_path, const Overrides& ov,
              const std::string& out) {
  ExperimentConfig cfg = load_config(config_path);
  apply(ov, cfg);
  RunArtifacts art = execute(cfg);
  const std::string stem = resolve_stem(out.empty() ? cfg.out : out, "solve");
  write_outputs(art, stem);
  std::cout << "status: " << to_string(art.run.status)
            << "  iterations: " << art.run.k_final << "  report: " << stem
            << ".csv\n";
  return exit_code_for(art.run.status);
}

int run_experiment(const std::string& name, const Overrides& ov,
                   const std::string& out, unsigned workers) {
  std::vector<NamedRun> runs =
      experiment_runs(name, ov.matrix, ov.seed_set ? ov.seed : 0);
  struct Job {
    NamedRun named;
    std::string stem;
  };
  std::vector<Job> jobs;
  for (NamedRun& named : runs) {
    Overrides rest = ov;
    rest.matrix.clear();  // experiment_runs already placed the matrix path
    rest.seed_set = false;
    apply(rest, named.cfg);
    Job job{std::move(named), ""};
    job.stem = resolve_stem(out, name) + job.named.suffix;
    jobs.push_back(std::move(job));
  }

  auto run_one = [](Job& job) {
    RunArtifacts art = execute(job.named.cfg);
    for (const std::string& note : job.named.notes)
      art.run.report.provenance.insert(art.run.report.provenance.begin(),
                                       note);
    write_outputs(art, job.stem);
    return art.run.status;
  };

  std::vector<SolveStatus> statuses(jobs.size());
  if (workers > 1 && jobs.size() > 1) {
    std::vector<std::future<SolveStatus>> futures;
    for (Job& job : jobs)
      futures.push_back(
          std::async(std::launch::async, [&job, &run_one] { return run_one(job); }));
    for (std::size_t i = 0; i < futures.size(); ++i)
      statuses[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i)
      statuses[i] = run_one(jobs[i]);
  }

  int worst = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::cout << name << jobs[i].named.suffix << ": "
              << to_string(statuses[i]) << "  report: " << jobs[i].stem
              << ".csv\n";
    worst = std::max(worst, exit_code_for(statuses[i]));
  }
  return worst;
}

int run_verify(const std::string& suite, std::size_t trials,
               std::uint64_t seed) {
  std::vector<SuiteResult> results;
  const std::vector<double> nur_levels = {1e-4, 3e-5, 1e-5, 3e-6};
  if (suite == "qre" || suite == "all")
    results.push_back(run_qre_suite(trials, seed));
  if (suite == "stls" || suite == "all")
    results.push_back(run_stls_suite(trials, seed));
  if (suite == "nur" || suite == "all")
    results.push_back(run_nur_suite(nur_levels, seed));
  if (suite == "rgap" || suite == "all")
    results.push_back(run_rgap_suite(std::min<std::size_t>(trials, 8), seed));
  if (suite == "theorem" || suite == "all")
    results.push_back(
        run_theorem_suite(std::min<std::size_t>(trials, 5), seed));
  if (results.empty()) {
    std::cerr << "unknown suite '" << suite
              << "' (nur | qre | stls | rgap | theorem | all)\n";
    return 1;
  }
  bool ok = true;
  for (const SuiteResult& r : results) {
    std::cout << r.name << ": " << (r.total - r.failed) << "/" << r.total
              << " pass, worst slack " << r.worst_slack << "\n";
    for (const std::string& line : r.lines) std::cout << "  " << line << "\n";
    ok = ok && r.ok();
  }
  return ok ? 0 : 1;
}

int run_gen_matrix(const std::string& kind, std::size_t n,
                   std::size_t superdiags, double cond,
                   const std::string& out) {
  Matrix m;
  bool symmetric = false;
  if (kind == "grcar") {
    m = grcar(n, superdiags);
  } else if (kind == "spd-test") {
    m = spd_test_matrix(n, cond);
    symmetric = true;
  } else {
    std::cerr << "unknown matrix kind '" << kind << "' (grcar | spd-test)\n";
    return 1;
  }
  write_matrix_market(m, out, symmetric);
  std::cout << "wrote " << out << " (" << m.nrows() << "x" << m.ncols()
            << ", nnz " << m.nnz() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inexact and variable-precision GMRES experiments"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run one configured solve");
  std::string config_path, solve_out;
  Overrides solve_ov;
  solve->add_option("--config", config_path, "config file (JSON)")
      ->required();
  solve->add_option("--out", solve_out, "output stem");
  add_override_flags(solve, solve_ov);

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a named experiment");
  std::string exp_name, exp_out;
  unsigned workers = 1;
  Overrides exp_ov;
  exp->add_option("name", exp_name,
                  "example1a | example1b | example2a | example2b | "
                  "multiprec-494-eps6 | multiprec-494-eps12")
      ->required();
  exp->add_option("--out", exp_out, "output stem");
  exp->add_option("--workers", workers, "parallel runs");
  add_override_flags(exp, exp_ov);

  // verify
  auto* verify = app.add_subcommand("verify", "run a diagnostics sweep");
  std::string suite;
  std::size_t trials = 100;
  std::uint64_t vseed = 0;
  verify->add_option("suite", suite, "nur | qre | stls | rgap | theorem | all")
      ->required();
  verify->add_option("--trials", trials, "trial count");
  verify->add_option("--seed", vseed, "rng seed");

  // gen-matrix
  auto* gen = app.add_subcommand("gen-matrix", "write a generated matrix");
  std::string kind, gen_out;
  std::size_t gen_n = 100, gen_super = 5;
  double gen_cond = 1e6;
  gen->add_option("kind", kind, "grcar | spd-test")->required();
  gen->add_option("n", gen_n, "order")->required();
  gen->add_option("--superdiags", gen_super, "grcar superdiagonals");
  gen->add_option("--cond", gen_cond, "spd-test condition number");
  gen->add_option("--out", gen_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(config_path, solve_ov, solve_out);
    if (*exp) return run_experiment(exp_name, exp_ov, exp_out, workers);
    if (*verify) return run_verify(suite, trials, vseed);
    if (*gen) return run_gen_matrix(kind, gen_n, gen_super, gen_cond, gen_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const MatrixMarketError& e) {
    std::cerr << "matrix market error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
