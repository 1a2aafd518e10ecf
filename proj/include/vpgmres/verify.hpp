#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vpgmres {

struct SuiteResult {
  std::string name;
  std::size_t total = 0;
  std::size_t failed = 0;
  double worst_slack = 0.0;  // suite-specific figure of merit
  std::vector<std::string> lines;

  bool ok() const { return failed == 0; }
};

/// Lemma-qre sweep: random (n, k, delta) bases, W-inner-product identity and
/// kappa bound.
SuiteResult run_qre_suite(std::size_t trials, std::uint64_t seed,
                          const std::vector<double>& deltas = {0.1, 0.3, 0.5,
                                                               0.9});

/// STLS sweep: random Hessenberg instances with admissible D.
SuiteResult run_stls_suite(std::size_t trials, std::uint64_t seed);

/// NUR identity on Grcar perturbation runs across eta levels (relative to
/// ||A||_2). Pass threshold 1e-8 on the relative defect.
SuiteResult run_nur_suite(const std::vector<double>& levels,
                          std::uint64_t seed, std::size_t kmax = 40);

/// Residual-gap bound on Grcar perturbation runs across eps levels, plus a
/// two-pass run with the theorem-rule epsilons checking gap <= eps/2 ||b||.
SuiteResult run_rgap_suite(std::size_t trials, std::uint64_t seed);

/// Theorem disjunction on two-pass Grcar runs.
SuiteResult run_theorem_suite(std::size_t trials, std::uint64_t seed,
                              const std::vector<double>& epsilons = {1e-6,
                                                                     1e-10});

}  // namespace vpgmres
