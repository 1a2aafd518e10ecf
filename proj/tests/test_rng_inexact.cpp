#include <cmath>

#include "doctest.h"
#include "vpgmres/generators.hpp"
#include "vpgmres/inexact.hpp"
#include "vpgmres/rng.hpp"

using namespace vpgmres;

TEST_CASE("rng determinism and substreams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng root(7);
  Rng s1 = root.substream(1);
  Rng s1_again = root.substream(1);
  Rng s2 = root.substream(2);
  CHECK(s1.next_u64() == s1_again.next_u64());
  CHECK(s1.next_u64() != s2.next_u64());

  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("rng normal moments are sane") {
  Rng r(11);
  double sum = 0.0, sumsq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    sum += x;
    sumsq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("perturbed_dot") {
  Rng rng(42);
  Vector e1{1, 0, 0};

  auto exact = perturbed_dot(e1, e1, 0.0, rng);
  CHECK(exact.value == 1.0);
  CHECK(exact.eta == 0.0);

  Rng r1(42), r2(42);
  auto a = perturbed_dot(e1, e1, 0.1, r1);
  auto b = perturbed_dot(e1, e1, 0.1, r2);
  CHECK(a.value == b.value);
  CHECK(a.eta == b.eta);

  Rng sweep(5);
  for (int i = 0; i < 500; ++i) {
    Vector v{sweep.normal(), sweep.normal(), sweep.normal()};
    Vector w{sweep.normal(), sweep.normal(), sweep.normal()};
    const double bound = 10.0 * sweep.next_double();
    auto p = perturbed_dot(v, w, bound, sweep);
    CHECK(std::abs(p.eta) <= bound);
    // recorded eta reproduces value - exact dot bit-exactly
    CHECK(p.value - dot(v, w) == p.eta);
  }
}

TEST_CASE("perturbed_matvec bound and exactness") {
  Rng rng(1);
  Matrix a = grcar(30, 2);
  Vector v(30);
  for (double& x : v) x = rng.normal();

  auto exact = perturbed_matvec(a, v, 0.0, rng);
  CHECK(exact.w == matvec(a, v));
  CHECK(exact.applied_norm == 0.0);

  auto p = perturbed_matvec(a, v, 1e-3, rng);
  Vector av = matvec(a, v);
  double diff = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i)
    diff += (p.w[i] - av[i]) * (p.w[i] - av[i]);
  CHECK(std::sqrt(diff) <= 1e-3 * norm2(v) * (1 + 2e-6));
  // perturbation vector is recorded exactly as applied
  for (std::size_t i = 0; i < av.size(); ++i)
    CHECK(p.w[i] == av[i] + p.perturbation[i]);
}

TEST_CASE("perturbed_matvec monte carlo operator-norm bound") {
  // 1000 fresh Gaussian perturbations at n=50; the applied perturbation can
  // exceed the nominal bound only by the power-iteration slack.
  const std::size_t n = 50;
  Matrix a = Matrix::identity(n);
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Rng t = rng.substream(trial);
    Vector v(n);
    for (double& x : v) x = t.normal();
    auto p = perturbed_matvec(a, v, 1e-4, t);
    worst = std::max(worst, norm2(p.perturbation) / norm2(v));
  }
  CHECK(worst <= 1e-4 * (1 + 2e-6));
}

TEST_CASE("perturbed_matvec economy mode keeps the operator-norm bound") {
  const std::size_t n = 40;
  Matrix a = Matrix::identity(n);
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    Rng t = rng.substream(trial);
    Vector v(n);
    for (double& x : v) x = t.normal();
    auto p = perturbed_matvec(a, v, 1e-5, t, true);
    CHECK(norm2(p.perturbation) <= 1e-5 * norm2(v) * (1 + 1e-12));
  }
}
