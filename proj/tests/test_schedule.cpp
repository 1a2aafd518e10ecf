#include <cmath>

#include "doctest.h"
#include "vpgmres/schedule.hpp"

using namespace vpgmres;

TEST_CASE("eta_aggressive") {
  CHECK(eta_aggressive(1e-8, 2.0, 2.0) == 1e-8);         // j=1: t_0 = ||b||
  CHECK(eta_aggressive(1e-8, 2.0, 0.2) == doctest::Approx(1e-7));
  // halving the residual doubles the tolerance
  const double base = eta_aggressive(1e-8, 3.0, 0.5);
  CHECK(eta_aggressive(1e-8, 3.0, 0.25) == doctest::Approx(2 * base));
  CHECK_THROWS_AS(eta_aggressive(1e-8, 1.0, 0.0), std::logic_error);
}

TEST_CASE("eta_conservative ratio is exactly sigma_min") {
  const double sigma = 0.0321;
  const double cons = eta_conservative(1e-8, sigma, 2.5, 0.7);
  const double aggr = eta_aggressive(1e-8, 2.5, 0.7);
  CHECK(cons / aggr == sigma);  // bit-exact by construction
  CHECK(eta_conservative(1e-8, 1.0, 2.5, 0.7) == aggr);
}

TEST_CASE("eta_theorem") {
  const double kSqrt2 = std::sqrt(2.0);
  CHECK(eta_theorem(1e-6, 1.0, kSqrt2, 3.0, 3.0) ==
        doctest::Approx(1e-6).epsilon(1e-15));
  CHECK_THROWS_AS(eta_theorem(1.5, 1.0, 1.0, 1.0, 1.0),
                  std::invalid_argument);

  // phi_j = Kmax^{-1/2} keeps sum phi^2 <= 1
  const std::size_t kmax = 64;
  const double phi = 1.0 / std::sqrt(static_cast<double>(kmax));
  CHECK(static_cast<double>(kmax) * phi * phi == doctest::Approx(1.0));
}

TEST_CASE("inverse proportionality to the residual norm") {
  // Within each mode eta_j * t_prev is constant.
  for (double t : {1.0, 0.5, 1e-3, 1e-9}) {
    CHECK(eta_aggressive(1e-10, 2.0, t) * t == doctest::Approx(2e-10));
    CHECK(eta_theorem(1e-4, 0.1, 0.9, 2.0, t) * t ==
          doctest::Approx(0.1 * 1e-4 * 0.9 / std::sqrt(2.0) * 2.0));
  }
}

TEST_CASE("schedule dispatch and theorem eps/eta ratio") {
  ExperimentConfig cfg;
  cfg.epsilon = 1e-8;
  cfg.threshold = ThresholdMode::Theorem;
  const std::size_t kmax = 100;
  ToleranceSchedule s = ToleranceSchedule::make(cfg, 2.0, 0.5, 0.8, kmax);
  const double eta = s.eta(3, 2.0, 0.01);
  const double eps = s.eps(3, 2.0, 0.01);
  // phi_eta = Kmax^{-1/2} and phi_eps = 1/Kmax (so that sum phi = 1 and the
  // residual-gap budget eps/2*||b|| holds); the ratio is
  // (1/sqrt(Kmax)) * (sqrt(2)/2).
  const double expect =
      std::sqrt(2.0) / 2.0 / std::sqrt(static_cast<double>(kmax));
  CHECK(eps / eta == doctest::Approx(expect).epsilon(1e-12));

  // aggressive and conservative use identical matvec tolerances
  cfg.threshold = ThresholdMode::Aggressive;
  ToleranceSchedule sa = ToleranceSchedule::make(cfg, 2.0, 0.5, 0.0, kmax);
  CHECK(sa.eps(1, 2.0, 0.5) == sa.eta(1, 2.0, 0.5));
  cfg.threshold = ThresholdMode::Conservative;
  ToleranceSchedule sc = ToleranceSchedule::make(cfg, 2.0, 0.5, 0.0, kmax);
  CHECK(sc.eps(1, 2.0, 0.5) == sc.eta(1, 2.0, 0.5));
  CHECK(sc.eta(1, 2.0, 0.5) / sa.eta(1, 2.0, 0.5) == 0.5);
}

TEST_CASE("fixed table schedule") {
  ExperimentConfig cfg;
  cfg.epsilon = 1e-10;
  cfg.threshold = ThresholdMode::FixedTable;
  cfg.table.default_value = 1e-12;
  cfg.table.relative = true;
  cfg.table.ranges = {{5, 8, 1e-4}};
  ToleranceSchedule s = ToleranceSchedule::make(cfg, 3.0, 0.0, 0.0, 20);
  CHECK(s.eta(1, 1.0, 0.5) == doctest::Approx(3e-12));
  CHECK(s.eta(5, 1.0, 0.5) == doctest::Approx(3e-4));
  CHECK(s.eps(6, 1.0, 0.5) == s.eta(6, 1.0, 0.5));
  CHECK(s.eta(9, 1.0, 0.5) == doctest::Approx(3e-12));
}

TEST_CASE("select_precision coarse trigger") {
  PrecisionModel model;
  model.coarse = true;
  model.a_norm2 = 4.0;

  // far below every low-precision model: binary64 with vacuous flag
  PrecisionDecision d = select_precision_dot(1e-18, model, 100, 1.0);
  CHECK(d.kind == PrecisionKind::Binary64);
  CHECK(d.vacuous);

  d = select_precision_dot(1e3 * model.a_norm2, model, 100, 1.0);
  CHECK(d.kind == PrecisionKind::Binary16);
  CHECK(!d.vacuous);

  // between u16*||A|| and u32*||A||: binary32
  d = select_precision_dot(1e-5, model, 100, 1.0);
  CHECK(d.kind == PrecisionKind::Binary32);

  // matvec uses the same coarse rule
  PrecisionDecision m = select_precision_matvec(1e-5, model, 1.0, 0.2);
  CHECK(m.kind == PrecisionKind::Binary32);
}

TEST_CASE("select_precision monotone in the tolerance") {
  PrecisionModel coarse;
  coarse.coarse = true;
  coarse.a_norm2 = 2.5;
  PrecisionModel fine;
  fine.coarse = false;
  fine.a_norm2 = 2.5;
  fine.a_norm_inf = 4.0;
  fine.max_row_entries = 12;
  fine.matrix_rounding_error_16 = 1e-3;
  fine.matrix_rounding_error_32 = 1e-7;

  for (const PrecisionModel* model : {&coarse, &fine}) {
    int prev = 2;
    for (double tol = 1e-16; tol < 1e6; tol *= 3.7) {
      PrecisionDecision dd = select_precision_dot(tol, *model, 64, 0.5);
      PrecisionDecision dm = select_precision_matvec(tol, *model, 1.0, 0.3);
      CHECK(static_cast<int>(dd.kind) <= prev);
      prev = static_cast<int>(dd.kind);
      CHECK(dd.modeled_error <= tol);
      CHECK(dm.modeled_error <= tol);
    }
  }
}
